#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmlab/prng.hpp"

namespace rmlab::freemoments {

using BigInt = boost::multiprecision::cpp_int;

// A finite product x_{i_1} ... x_{i_p} of generators, 1-based indices.
struct Word {
    std::vector<int> letters;

    Word(std::initializer_list<int> init);
    explicit Word(std::vector<int> letters);

    int length() const { return static_cast<int>(letters.size()); }
    int max_letter() const;
    bool alternating() const;  // neighbouring letters differ

    std::string to_string() const;  // "(1,2,1,2)"
};

// k-th Catalan number binom(2k,k)/(k+1): the 2k-th moment of a standard
// semicircular element.
BigInt catalan_moment(int k);

// Number of non-crossing pair partitions of {1..p} whose pairs connect equal
// letters; 0 for odd p. This is the mixed moment of a semicircular family.
BigInt free_semicircular_moment(const Word& w);

// Checks the defining property of freeness on w: every product of centered
// monomials (x_i^d - phi(x_i^d), degrees 1..max_degree) along an alternating
// word has moment exactly 0. Exact integer arithmetic throughout.
bool verify_freeness_def(const Word& w, int max_degree);

// Monte Carlo tr_n of the word product over independent Gaussian selfadjoint
// matrices with variance 1/n, one matrix per generator index. Replica r uses
// streams stream_base + r*L .. stream_base + r*L + L-1 (L = max letter), so a
// caller can pack several estimates into one seed without collisions.
std::pair<double, double> empirical_mixed_moment(const Word& w, int n, int replicas, Seed seed,
                                                 std::uint64_t stream_base = 0, int workers = 0);

struct MomentReport {
    Word word;
    BigInt oracle;
    int replicas = 0;
    struct Row {
        int n;
        double mean;
        double stderr_;
    };
    std::vector<Row> rows;

    std::string to_json() const;  // oracle carried as an exact decimal string
};

MomentReport asymptotic_freeness_report(const Word& w, const std::vector<int>& n_list, int replicas,
                                        Seed seed, int workers = 0);

}  // namespace rmlab::freemoments
