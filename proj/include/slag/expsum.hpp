#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "slag/common.hpp"
#include "slag/frame.hpp"

namespace slag {

// One term c * tau^powers * exp(i * (B*lattice) . tau).  Frequencies are
// kept as integer lattice keys; the frame realizes them as reals only at
// evaluation time, so merging and cancellation during antidifferentiation
// are exact.
struct ExpTerm {
    cplx coeff{0.0, 0.0};
    std::vector<int> powers;   // monomial exponents, length = rank
    std::vector<int> lattice;  // frequency in simple-root coordinates
};

using TermKey = std::pair<std::vector<int>, std::vector<int>>;  // (lattice, powers)

inline TermKey term_key(const ExpTerm& t) { return {t.lattice, t.powers}; }

// Finite sum of ExpTerms over a fixed FrequencyFrame, kept canonical:
// terms sorted by (lattice, powers) lexicographically, no duplicate keys,
// coefficients below 1e-15 of the largest magnitude pruned.
class ExpPoly {
  public:
    ExpPoly() = default;
    explicit ExpPoly(FrequencyFrame frame) : frame_(std::move(frame)) {}
    ExpPoly(FrequencyFrame frame, std::vector<ExpTerm> terms)
        : frame_(std::move(frame)), terms_(std::move(terms)) {
        canonicalize();
    }

    static ExpPoly constant(const FrequencyFrame& frame, cplx value) {
        ExpTerm t;
        t.coeff = value;
        t.powers.assign(frame.rank(), 0);
        t.lattice.assign(frame.rank(), 0);
        return ExpPoly(frame, {t});
    }

    const FrequencyFrame& frame() const { return frame_; }
    const std::vector<ExpTerm>& terms() const { return terms_; }
    int rank() const { return frame_.rank(); }
    bool empty() const { return terms_.empty(); }

    cplx eval(const std::vector<cplx>& tau) const {
        const int r = rank();
        if (static_cast<int>(tau.size()) != r)
            throw domain_error("eval: tau length does not match rank");
        cplx sum{0.0, 0.0};
        for (const auto& t : terms_) {
            cplx phase{0.0, 0.0};
            for (int j = 0; j < r; ++j) {
                double lj = 0.0;
                for (int m = 0; m < r; ++m)
                    lj += frame_.basis()[j][m] * t.lattice[m];
                phase += lj * tau[j];
            }
            cplx v = t.coeff * std::exp(cplx(0.0, 1.0) * phase);
            for (int j = 0; j < r; ++j)
                for (int p = 0; p < t.powers[j]; ++p) v *= tau[j];
            sum += v;
        }
        return sum;
    }

    cplx eval(cplx tau) const { return eval(std::vector<cplx>{tau}); }

    // sum_k |c_k tau^alpha e^{i lambda_k . tau}|: the natural magnitude of
    // the evaluation, used as the conditioning scale when comparing against
    // independent evaluations near zeros of the sum
    double term_magnitude_sum(const std::vector<cplx>& tau) const {
        const int r = rank();
        if (static_cast<int>(tau.size()) != r)
            throw domain_error("term_magnitude_sum: tau length mismatch");
        double sum = 0.0;
        for (const auto& t : terms_) {
            double im_phase = 0.0;
            for (int j = 0; j < r; ++j) {
                double lj = 0.0;
                for (int m = 0; m < r; ++m)
                    lj += frame_.basis()[j][m] * t.lattice[m];
                im_phase += lj * tau[j].imag();
            }
            double mag = std::abs(t.coeff) * std::exp(-im_phase);
            for (int j = 0; j < r; ++j)
                for (int p = 0; p < t.powers[j]; ++p) mag *= std::abs(tau[j]);
            sum += mag;
        }
        return sum;
    }

    ExpPoly scaled(cplx factor) const {
        std::vector<ExpTerm> out = terms_;
        for (auto& t : out) t.coeff *= factor;
        return ExpPoly(frame_, std::move(out));
    }

    friend ExpPoly mul(const ExpPoly& a, const ExpPoly& b) {
        if (a.frame_ != b.frame_)
            throw domain_error("mul: frequency frames differ");
        const int r = a.rank();
        std::map<TermKey, cplx> acc;
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                ExpTerm t;
                t.coeff = ta.coeff * tb.coeff;
                t.powers.resize(r);
                t.lattice.resize(r);
                for (int j = 0; j < r; ++j) {
                    t.powers[j] = ta.powers[j] + tb.powers[j];
                    t.lattice[j] = ta.lattice[j] + tb.lattice[j];
                }
                acc[term_key(t)] += t.coeff;
            }
        return ExpPoly::from_map(a.frame_, acc);
    }

    friend ExpPoly add(const ExpPoly& a, const ExpPoly& b) {
        if (a.frame_ != b.frame_)
            throw domain_error("add: frequency frames differ");
        std::map<TermKey, cplx> acc;
        for (const auto& t : a.terms_) acc[term_key(t)] += t.coeff;
        for (const auto& t : b.terms_) acc[term_key(t)] += t.coeff;
        return ExpPoly::from_map(a.frame_, acc);
    }

    // term-wise d/dtau_axis (axis is 0-based)
    ExpPoly derivative(int axis) const {
        require_axis(axis);
        const int r = rank();
        std::map<TermKey, cplx> acc;
        for (const auto& t : terms_) {
            double lam = 0.0;
            for (int m = 0; m < r; ++m)
                lam += frame_.basis()[axis][m] * t.lattice[m];
            if (!frame_.frequency_component_is_zero(t.lattice, axis)) {
                ExpTerm e = t;
                e.coeff *= cplx(0.0, lam);
                acc[term_key(e)] += e.coeff;
            }
            if (t.powers[axis] > 0) {
                ExpTerm m = t;
                m.coeff *= static_cast<double>(t.powers[axis]);
                m.powers[axis] -= 1;
                acc[term_key(m)] += m.coeff;
            }
        }
        return ExpPoly::from_map(frame_, acc);
    }

    // term-wise antiderivative in tau_axis with integration constant 0.
    // The degenerate branch (realized frequency component exactly zero) is
    // decided on the integer lattice.
    ExpPoly antiderivative(int axis) const {
        require_axis(axis);
        const int r = rank();
        std::map<TermKey, cplx> acc;
        for (const auto& t : terms_) {
            if (frame_.frequency_component_is_zero(t.lattice, axis)) {
                ExpTerm e = t;
                e.powers[axis] += 1;
                e.coeff /= static_cast<double>(e.powers[axis]);
                acc[term_key(e)] += e.coeff;
                continue;
            }
            double lam = 0.0;
            for (int m = 0; m < r; ++m)
                lam += frame_.basis()[axis][m] * t.lattice[m];
            const cplx ilam(0.0, lam);
            const int alpha = t.powers[axis];
            // repeated integration by parts:
            //   int tau^a e^{il tau} = e^{il tau} * sum_{k=0}^{a}
            //       (-1)^k a!/(a-k)! tau^{a-k} / (il)^{k+1}
            double fall = 1.0;  // a!/(a-k)!
            cplx denom = ilam;
            for (int k = 0; k <= alpha; ++k) {
                ExpTerm e = t;
                e.powers[axis] = alpha - k;
                e.coeff = t.coeff * ((k % 2 == 0) ? 1.0 : -1.0) * fall / denom;
                acc[term_key(e)] += e.coeff;
                fall *= static_cast<double>(alpha - k);
                denom *= ilam;
            }
        }
        return ExpPoly::from_map(frame_, acc);
    }

    bool same_terms(const ExpPoly& o, double coeff_tol) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].lattice != o.terms_[i].lattice ||
                terms_[i].powers != o.terms_[i].powers)
                return false;
            if (std::abs(terms_[i].coeff - o.terms_[i].coeff) > coeff_tol)
                return false;
        }
        return true;
    }

  private:
    static ExpPoly from_map(const FrequencyFrame& frame,
                            const std::map<TermKey, cplx>& acc) {
        ExpPoly out(frame);
        out.terms_.reserve(acc.size());
        for (const auto& [key, c] : acc) {
            ExpTerm t;
            t.lattice = key.first;
            t.powers = key.second;
            t.coeff = c;
            out.terms_.push_back(std::move(t));
        }
        out.canonicalize();
        return out;
    }

    void require_axis(int axis) const {
        if (axis < 0 || axis >= rank())
            throw domain_error("axis " + std::to_string(axis + 1) +
                               " out of range 1.." + std::to_string(rank()));
    }

    void canonicalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const ExpTerm& a, const ExpTerm& b) {
                      return term_key(a) < term_key(b);
                  });
        std::vector<ExpTerm> merged;
        for (auto& t : terms_) {
            if (!merged.empty() && term_key(merged.back()) == term_key(t))
                merged.back().coeff += t.coeff;
            else
                merged.push_back(t);
        }
        double maxmag = 0.0;
        for (const auto& t : merged)
            maxmag = std::max(maxmag, std::abs(t.coeff));
        terms_.clear();
        for (auto& t : merged)
            if (std::abs(t.coeff) > 1e-15 * maxmag && t.coeff != cplx(0.0))
                terms_.push_back(std::move(t));
    }

    FrequencyFrame frame_;
    std::vector<ExpTerm> terms_;
};

enum class TrigKind { sin, cos };

// Binomial expansion of sin^m or cos^m of (B*lattice).tau.  power 0 gives
// the constant 1.
inline ExpPoly from_trig_power(const FrequencyFrame& frame, TrigKind kind,
                               const std::vector<int>& lattice, int power) {
    if (static_cast<int>(lattice.size()) != frame.rank())
        throw domain_error("from_trig_power: lattice length mismatch");
    bool all_zero = true;
    for (int v : lattice)
        if (v != 0) all_zero = false;
    if (all_zero) throw domain_error("from_trig_power: zero lattice");
    if (power < 0) throw domain_error("from_trig_power: negative power");
    if (power == 0) return ExpPoly::constant(frame, 1.0);

    // sin^m = (2i)^{-m} sum_k C(m,k) (-1)^k e^{i(m-2k) l.tau}
    // cos^m =  2^{-m}   sum_k C(m,k)        e^{i(m-2k) l.tau}
    const int r = frame.rank();
    cplx prefactor = 1.0;
    if (kind == TrigKind::sin)
        prefactor = std::pow(cplx(0.0, 2.0), -power);
    else
        prefactor = std::pow(cplx(2.0, 0.0), -power);

    std::vector<ExpTerm> terms;
    double binom = 1.0;
    for (int k = 0; k <= power; ++k) {
        ExpTerm t;
        t.coeff = prefactor * binom;
        if (kind == TrigKind::sin && (k % 2 == 1)) t.coeff = -t.coeff;
        t.powers.assign(r, 0);
        t.lattice.resize(r);
        for (int j = 0; j < r; ++j) t.lattice[j] = (power - 2 * k) * lattice[j];
        terms.push_back(std::move(t));
        binom = binom * (power - k) / (k + 1);
    }
    return ExpPoly(frame, std::move(terms));
}

}  // namespace slag
