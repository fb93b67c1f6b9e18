#include "rmlab/freemoments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmlab/ensembles.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/matrix.hpp"
#include "rmlab/parallel.hpp"

namespace rmlab::freemoments {

namespace {

void validate_letters(const std::vector<int>& letters) {
    if (letters.empty()) throw domain_error("word: must have at least one letter");
    for (int v : letters)
        if (v < 1) throw domain_error("word: generator indices are >= 1");
}

// Counts colour-respecting non-crossing pairings of letters[begin, end) by
// pairing the first position with every admissible partner; the two gaps it
// creates are independent.
BigInt count_ncp(const std::vector<int>& letters, int begin, int end) {
    if (begin == end) return 1;
    if ((end - begin) % 2 != 0) return 0;
    BigInt total = 0;
    for (int j = begin + 1; j < end; j += 2) {
        if (letters[j] != letters[begin]) continue;
        total += count_ncp(letters, begin + 1, j) * count_ncp(letters, j + 1, end);
    }
    return total;
}

}  // namespace

Word::Word(std::initializer_list<int> init) : letters(init) { validate_letters(letters); }
Word::Word(std::vector<int> l) : letters(std::move(l)) { validate_letters(letters); }

int Word::max_letter() const { return *std::max_element(letters.begin(), letters.end()); }

bool Word::alternating() const {
    for (std::size_t i = 1; i < letters.size(); ++i)
        if (letters[i] == letters[i - 1]) return false;
    return true;
}

std::string Word::to_string() const {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < letters.size(); ++i) out << (i ? "," : "") << letters[i];
    out << ")";
    return out.str();
}

BigInt catalan_moment(int k) {
    if (k < 0) throw domain_error("catalan_moment: k must be >= 0");
    BigInt num = 1;
    for (int i = 0; i < k; ++i) num *= (2 * k - i);  // (2k)! / k!
    BigInt den = 1;
    for (int i = 2; i <= k; ++i) den *= i;
    return num / den / (k + 1);
}

BigInt free_semicircular_moment(const Word& w) {
    return count_ncp(w.letters, 0, w.length());
}

namespace {

// phi(x^d) for one semicircular generator.
BigInt monomial_moment(int degree) {
    if (degree % 2 != 0) return 0;
    return catalan_moment(degree / 2);
}

}  // namespace

bool verify_freeness_def(const Word& w, int max_degree) {
    if (!w.alternating()) throw domain_error("verify_freeness_def: word must be alternating");
    if (max_degree < 1) throw domain_error("verify_freeness_def: max_degree must be >= 1");
    const int p = w.length();
    std::vector<int> degrees(p, 1);
    for (;;) {
        // phi( prod_k (x_{i_k}^{d_k} - phi(x^{d_k})) ), expanded over subsets.
        BigInt total = 0;
        for (unsigned mask = 0; mask < (1u << p); ++mask) {
            std::vector<int> expanded;
            BigInt coeff = 1;
            for (int k = 0; k < p; ++k) {
                if (mask & (1u << k)) {
                    expanded.insert(expanded.end(), degrees[k], w.letters[k]);
                } else {
                    coeff *= -monomial_moment(degrees[k]);
                }
            }
            if (coeff == 0) continue;
            BigInt inner = expanded.empty() ? BigInt(1) : count_ncp(expanded, 0, static_cast<int>(expanded.size()));
            total += coeff * inner;
        }
        if (total != 0) return false;

        int pos = p - 1;
        while (pos >= 0 && degrees[pos] == max_degree) degrees[pos--] = 1;
        if (pos < 0) break;
        ++degrees[pos];
    }
    return true;
}

std::pair<double, double> empirical_mixed_moment(const Word& w, int n, int replicas, Seed seed,
                                                 std::uint64_t stream_base, int workers) {
    if (n < 1) throw domain_error("empirical_mixed_moment: n must be >= 1");
    if (replicas < 1) throw domain_error("empirical_mixed_moment: replicas must be >= 1");
    const int letters = w.max_letter();
    std::vector<double> values(replicas);

    parallel_for(
        static_cast<std::size_t>(replicas),
        [&](std::size_t rep) {
            ensembles::EnsembleSpec spec = ensembles::EnsembleSpec::gue(n);
            std::vector<ComplexMatrix> x;
            x.reserve(letters);
            for (int i = 0; i < letters; ++i)
                x.push_back(ensembles::sample_gue(
                    spec, derive_seed(seed, stream_base + static_cast<std::uint64_t>(rep) * letters + i)));
            ComplexMatrix prod = x[w.letters[0] - 1];
            for (int k = 1; k < w.length(); ++k) prod = prod * x[w.letters[k] - 1];
            values[rep] = prod.trace().real() / n;
        },
        workers);

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= replicas;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = replicas > 1 ? var / (replicas - 1) : 0.0;
    return {mean, std::sqrt(var / replicas)};
}

MomentReport asymptotic_freeness_report(const Word& w, const std::vector<int>& n_list, int replicas,
                                        Seed seed, int workers) {
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw domain_error("asymptotic_freeness_report: n_list must ascend");
    MomentReport report{w, free_semicircular_moment(w), replicas, {}};
    const std::uint64_t span = static_cast<std::uint64_t>(replicas) * w.max_letter();
    for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
        auto [mean, se] = empirical_mixed_moment(w, n_list[idx], replicas, seed, idx * span, workers);
        report.rows.push_back({n_list[idx], mean, se});
    }
    return report;
}

std::string MomentReport::to_json() const {
    std::ostringstream out;
    out.precision(17);
    out << "{\"word\":[";
    for (std::size_t i = 0; i < word.letters.size(); ++i) out << (i ? "," : "") << word.letters[i];
    out << "],\"oracle\":\"" << oracle.str() << "\",\"replicas\":" << replicas << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << (i ? "," : "") << "{\"n\":" << rows[i].n << ",\"mean\":" << rows[i].mean
            << ",\"stderr\":" << rows[i].stderr_ << "}";
    }
    out << "]}";
    return out.str();
}

}  // namespace rmlab::freemoments
