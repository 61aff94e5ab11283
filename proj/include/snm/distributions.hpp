#pragma once

// Catalog of non-negative distributions exposing exactly the functionals the
// ratio engine consumes: Laplace transform, mass at zero, and moments under
// the exponentially tilted law F^(lambda) with dF^(lambda) = e^{-lambda x} dF / L(lambda).
//
// For Gamma, Exponential, Poisson, Bernoulli, NegativeBinomial,
// InverseGaussian and PointMass the tilted law stays inside the catalog
// (closed-form parameter update); Pareto and Lognormal use numeric paths.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "snm/errors.hpp"
#include "snm/quadrature.hpp"
#include "snm/rng.hpp"
#include "snm/special.hpp"

namespace snm {

enum class Family {
    Gamma,
    Exponential,
    Pareto,
    Poisson,
    Bernoulli,
    NegativeBinomial,
    Lognormal,
    InverseGaussian,
    PointMass
};

enum class SupportKind { continuous, discrete };

enum class Stat { gini, scv, theil };

namespace detail {

// Tolerances for the catalog's internal 1-D integrals; one notch tighter than
// the engine defaults so inner error does not dominate.
inline constexpr double kInnerRel = 1e-12;
inline constexpr double kInnerAbs = 1e-280;

// --- unit Pareto (x_m = 1) helpers, shape a > 1 ---------------------------
//
// log E[Y^j e^{-lam Y}] via the substitution u = y^{-a}, which turns every
// moment integral into a bounded integrand on (0,1):
//   E[Y^j e^{-lam Y}] = int_0^1 u^{-j/a} exp(-lam u^{-1/a}) du.
// For lam >= 30 the continued fraction of the upper incomplete gamma is used
// instead: E = a e^{-lam} / D(j-a, lam).
inline double pareto_log_exp_moment(int j, double a, double lam) {
    if (lam == 0.0) {
        if (a <= j) throw CapabilityError("Pareto moment of order >= shape is infinite");
        return std::log(a / (a - j));
    }
    if (lam >= 30.0)
        return std::log(a) + (a - j) * std::log(lam) + special::log_gamma_upper_cf(j - a, lam);
    auto integrand = [j, a, lam](double u) {
        const double e = -(double(j) / a) * std::log(u) - lam * std::pow(u, -1.0 / a);
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    auto r = integrate_finite(integrand, 0.0, 1.0, kInnerRel, kInnerAbs, 4000);
    return std::log(r.value);
}

// Cumulative table for the tilted unit-Pareto tail integral
//   C(u) = int_0^u exp(-lam v^{-1/a}) dv,  u in (0,1],
// so that the tail weight int_x^infty a t^{-a-1} e^{-lam t} dt = C(x^{-a}).
// Panel prefix sums are precomputed once per (a, lam); each query then costs
// a single 15-point panel over the partial segment.  Used when lam < 30 (the
// continued-fraction branch covers the rest).
class ParetoTailTable {
public:
    ParetoTailTable(double a, double lam) : a_(a), lam_(lam) {
        // quarter-octave geometric panels resolve the exponential ramp of
        // g(u) = exp(-lam u^{-1/a}) wherever it falls; uniform panels cover
        // the smooth bulk.  Mass below the smallest edge is < 4e-15 and is
        // integrated directly on query.
        const double h = 1.0 / kUniform;
        const double ratio = std::pow(2.0, 0.25);
        edges_.push_back(h * std::pow(2.0, -double(kOctaves)));
        while (edges_.back() * ratio < h) edges_.push_back(edges_.back() * ratio);
        for (int i = 1; i <= kUniform; ++i) edges_.push_back(double(i) * h);
        prefix_.assign(edges_.size(), 0.0);
        prefix_[0] = panel(0.0, edges_[0]);
        for (std::size_t i = 1; i < edges_.size(); ++i)
            prefix_[i] = prefix_[i - 1] + panel(edges_[i - 1], edges_[i]);
    }

    double value(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return prefix_.back();
        if (u <= edges_[0]) return panel(0.0, u);
        const auto it = std::upper_bound(edges_.begin(), edges_.end(), u);
        const std::size_t i = std::size_t(it - edges_.begin()); // edges_[i-1] < u <= edges_[i]
        return prefix_[i - 1] + panel(edges_[i - 1], u);
    }

    double total() const { return prefix_.back(); }

private:
    static constexpr int kUniform = 512;
    static constexpr int kOctaves = 48;

    double panel(double lo, double hi) const {
        if (hi <= lo) return 0.0;
        const double a = a_, lam = lam_;
        auto g = [a, lam](double u) {
            const double e = -lam * std::pow(u, -1.0 / a);
            return e < -745.0 ? 0.0 : std::exp(e);
        };
        double v = 0.0, err = 0.0;
        gk15(g, lo, hi, v, err);
        return v;
    }

    double a_, lam_;
    std::vector<double> edges_;
    std::vector<double> prefix_;
};

// log int_x^infty a t^{-a-1} e^{-lam t} dt  (x >= 1)
inline double pareto_log_tail(double a, double lam, double x) {
    if (lam == 0.0) return -a * std::log(x);
    if (lam * x >= 30.0)
        return std::log(a) + a * std::log(lam) + special::log_gamma_upper_cf(-a, lam * x);
    const double ub = std::pow(x, -a);
    auto integrand = [a, lam](double u) {
        const double e = -lam * std::pow(u, -1.0 / a);
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    auto r = integrate_finite(integrand, 0.0, ub, kInnerRel, kInnerAbs, 4000);
    return std::log(r.value);
}

} // namespace detail

struct SampleData; // fwd (estimators.hpp)

class DistributionSpec {
public:
    static DistributionSpec gamma(double shape, double scale) {
        require(shape > 0.0 && scale > 0.0, "gamma requires shape > 0 and scale > 0");
        return {Family::Gamma, shape, scale};
    }
    static DistributionSpec exponential(double rate) {
        require(rate > 0.0, "exponential requires rate > 0");
        return {Family::Exponential, rate, 0.0};
    }
    static DistributionSpec pareto(double shape, double xm = 1.0) {
        require(shape > 1.0 && xm > 0.0, "pareto requires shape > 1 (finite mean) and xm > 0");
        return {Family::Pareto, shape, xm};
    }
    static DistributionSpec poisson(double mu) {
        require(mu > 0.0, "poisson requires mu > 0");
        return {Family::Poisson, mu, 0.0};
    }
    static DistributionSpec bernoulli(double p) {
        require(p >= 0.0 && p <= 1.0, "bernoulli requires p in [0,1]");
        return {Family::Bernoulli, p, 0.0};
    }
    static DistributionSpec negative_binomial(double r, double p) {
        require(r > 0.0 && p > 0.0 && p < 1.0, "negative_binomial requires r > 0 and p in (0,1)");
        return {Family::NegativeBinomial, r, p};
    }
    static DistributionSpec lognormal(double mu, double sigma) {
        require(sigma > 0.0, "lognormal requires sigma > 0");
        return {Family::Lognormal, mu, sigma};
    }
    static DistributionSpec inverse_gaussian(double mu, double lambda) {
        require(mu > 0.0 && lambda > 0.0, "inverse_gaussian requires mu > 0 and lambda > 0");
        return {Family::InverseGaussian, mu, lambda};
    }
    static DistributionSpec point_mass(double value) {
        require(value >= 0.0, "point_mass requires value >= 0");
        return {Family::PointMass, value, 0.0};
    }

    Family family() const { return family_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }

    SupportKind support_kind() const {
        switch (family_) {
            case Family::Poisson:
            case Family::Bernoulli:
            case Family::NegativeBinomial:
                return SupportKind::discrete;
            case Family::PointMass:
                return SupportKind::discrete;
            default:
                return SupportKind::continuous;
        }
    }

    double mean() const {
        switch (family_) {
            case Family::Gamma: return p1_ * p2_;
            case Family::Exponential: return 1.0 / p1_;
            case Family::Pareto: return p1_ / (p1_ - 1.0) * p2_;
            case Family::Poisson: return p1_;
            case Family::Bernoulli: return p1_;
            case Family::NegativeBinomial: return p1_ * (1.0 - p2_) / p2_;
            case Family::Lognormal: return std::exp(p1_ + 0.5 * p2_ * p2_);
            case Family::InverseGaussian: return p1_;
            case Family::PointMass: return p1_;
        }
        throw DomainError("bad family");
    }

    double variance() const {
        switch (family_) {
            case Family::Gamma: return p1_ * p2_ * p2_;
            case Family::Exponential: return 1.0 / (p1_ * p1_);
            case Family::Pareto: {
                const double a = p1_;
                if (a <= 2.0)
                    throw CapabilityError("Pareto variance infinite for shape <= 2");
                return a * p2_ * p2_ / ((a - 1.0) * (a - 1.0) * (a - 2.0));
            }
            case Family::Poisson: return p1_;
            case Family::Bernoulli: return p1_ * (1.0 - p1_);
            case Family::NegativeBinomial: return p1_ * (1.0 - p2_) / (p2_ * p2_);
            case Family::Lognormal: {
                const double s2 = p2_ * p2_;
                return (std::exp(s2) - 1.0) * std::exp(2.0 * p1_ + s2);
            }
            case Family::InverseGaussian: return p1_ * p1_ * p1_ / p2_;
            case Family::PointMass: return 0.0;
        }
        throw DomainError("bad family");
    }

    // Raw moment E[X^j], j in {0,1,2,3}.
    double moment(int j) const {
        if (j == 0) return 1.0;
        if (j == 1) return mean();
        switch (family_) {
            case Family::Gamma: {
                double m = 1.0;
                for (int i = 0; i < j; ++i) m *= (p1_ + i) * p2_;
                return m;
            }
            case Family::Exponential: {
                double m = 1.0;
                for (int i = 1; i <= j; ++i) m *= i / p1_;
                return m;
            }
            case Family::Pareto: {
                if (p1_ <= j) throw CapabilityError("Pareto raw moment infinite");
                return p1_ / (p1_ - j) * std::pow(p2_, j);
            }
            case Family::Poisson: {
                const double m = p1_;
                if (j == 2) return m + m * m;
                return m + 3.0 * m * m + m * m * m;
            }
            case Family::Bernoulli: return p1_;
            case Family::NegativeBinomial: {
                const double w = (1.0 - p2_) / p2_;
                const double f1 = p1_ * w;
                const double f2 = p1_ * (p1_ + 1.0) * w * w;
                if (j == 2) return f2 + f1;
                const double f3 = p1_ * (p1_ + 1.0) * (p1_ + 2.0) * w * w * w;
                return f3 + 3.0 * f2 + f1;
            }
            case Family::Lognormal: return std::exp(j * p1_ + 0.5 * j * j * p2_ * p2_);
            case Family::InverseGaussian: {
                const double m = p1_, phi = p1_ / p2_;
                if (j == 2) return m * m * (1.0 + phi);
                return m * m * m * (1.0 + 3.0 * phi + 3.0 * phi * phi);
            }
            case Family::PointMass: return std::pow(p1_, j);
        }
        throw DomainError("bad family");
    }

    // --- Laplace transform L(lambda) = E[e^{-lambda X}] -------------------
    double laplace(double lam) const {
        if (lam < 0.0) throw DomainError("laplace requires lambda >= 0");
        if (lam == 0.0) return 1.0;
        const double ll = log_laplace(lam);
        return std::exp(ll);
    }

    double log_laplace(double lam) const {
        if (lam < 0.0) throw DomainError("laplace requires lambda >= 0");
        if (lam == 0.0) return 0.0;
        switch (family_) {
            case Family::Gamma: return -p1_ * std::log1p(p2_ * lam);
            case Family::Exponential: return -std::log1p(lam / p1_);
            case Family::Pareto: return detail::pareto_log_exp_moment(0, p1_, lam * p2_);
            case Family::Poisson: return p1_ * std::expm1(-lam);
            case Family::Bernoulli: return std::log(1.0 - p1_ + p1_ * std::exp(-lam));
            case Family::NegativeBinomial:
                return p1_ * (std::log(p2_) - std::log1p(-(1.0 - p2_) * std::exp(-lam)));
            case Family::Lognormal: {
                // E[e^{-lam X}] = int phi(z) exp(-lam e^{mu + sigma z}) dz
                const double mu = p1_, sg = p2_;
                auto f = [mu, sg, lam](double z) {
                    return std::exp(-0.5 * z * z - lam * std::exp(mu + sg * z)) /
                           std::sqrt(2.0 * M_PI);
                };
                auto r = integrate_finite(f, -37.0, 14.0, detail::kInnerRel, detail::kInnerAbs, 4000);
                if (r.value <= 0.0) return -std::numeric_limits<double>::infinity();
                return std::log(r.value);
            }
            case Family::InverseGaussian: {
                const double mu = p1_, lw = p2_;
                return lw / mu * (1.0 - std::sqrt(1.0 + 2.0 * mu * mu * lam / lw));
            }
            case Family::PointMass: return -lam * p1_;
        }
        throw DomainError("bad family");
    }

    double zero_mass() const {
        switch (family_) {
            case Family::Poisson: return std::exp(-p1_);
            case Family::Bernoulli: return 1.0 - p1_;
            case Family::NegativeBinomial: return std::pow(p2_, p1_);
            case Family::PointMass: return p1_ == 0.0 ? 1.0 : 0.0;
            default: return 0.0;
        }
    }

    double cdf(double x) const {
        if (x < 0.0) return 0.0;
        switch (family_) {
            case Family::Gamma: return special::gamma_p(p1_, x / p2_);
            case Family::Exponential: return -std::expm1(-p1_ * x);
            case Family::Pareto:
                return x < p2_ ? 0.0 : 1.0 - std::pow(x / p2_, -p1_);
            case Family::Poisson:
            case Family::Bernoulli:
            case Family::NegativeBinomial: {
                double s = 0.0;
                for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) s += pmf(k);
                return std::min(s, 1.0);
            }
            case Family::Lognormal:
                return x == 0.0 ? 0.0 : special::normal_cdf((std::log(x) - p1_) / p2_);
            case Family::InverseGaussian: {
                if (x == 0.0) return 0.0;
                const double mu = p1_, lw = p2_;
                const double s = std::sqrt(lw / x);
                return special::normal_cdf(s * (x / mu - 1.0)) +
                       std::exp(2.0 * lw / mu) * special::normal_cdf(-s * (x / mu + 1.0));
            }
            case Family::PointMass: return x >= p1_ ? 1.0 : 0.0;
        }
        throw DomainError("bad family");
    }

    // pmf at integer k (discrete families only)
    double pmf(std::int64_t k) const {
        if (k < 0) return 0.0;
        switch (family_) {
            case Family::Poisson:
                return std::exp(-p1_ + k * std::log(p1_) - std::lgamma(double(k) + 1.0));
            case Family::Bernoulli:
                return k == 0 ? 1.0 - p1_ : (k == 1 ? p1_ : 0.0);
            case Family::NegativeBinomial:
                return std::exp(std::lgamma(k + p1_) - std::lgamma(double(k) + 1.0) -
                                std::lgamma(p1_) + p1_ * std::log(p2_) +
                                k * std::log1p(-p2_));
            case Family::PointMass:
                return double(k) == p1_ ? 1.0 : 0.0;
            default:
                throw CapabilityError("pmf only defined for discrete families");
        }
    }

    double density(double x) const {
        switch (family_) {
            case Family::Gamma:
                return std::exp((p1_ - 1.0) * std::log(x) - x / p2_ - std::lgamma(p1_) -
                                p1_ * std::log(p2_));
            case Family::Exponential: return p1_ * std::exp(-p1_ * x);
            case Family::Pareto:
                return x < p2_ ? 0.0 : p1_ * std::pow(p2_, p1_) * std::pow(x, -p1_ - 1.0);
            case Family::Lognormal: {
                const double z = (std::log(x) - p1_) / p2_;
                return std::exp(-0.5 * z * z) / (x * p2_ * std::sqrt(2.0 * M_PI));
            }
            case Family::InverseGaussian: {
                const double mu = p1_, lw = p2_;
                return std::sqrt(lw / (2.0 * M_PI * x * x * x)) *
                       std::exp(-lw * (x - mu) * (x - mu) / (2.0 * mu * mu * x));
            }
            default:
                throw CapabilityError("density only defined for continuous families");
        }
    }

    // Gini mean difference E|X1 - X2| of the base law.
    double gmd() const {
        switch (family_) {
            case Family::Gamma:
                return 2.0 * p2_ *
                       std::exp(std::lgamma(p1_ + 0.5) - std::lgamma(p1_)) / std::sqrt(M_PI);
            case Family::Exponential: return 1.0 / p1_;
            case Family::Pareto:
                return 2.0 * p2_ * p1_ / ((p1_ - 1.0) * (2.0 * p1_ - 1.0));
            case Family::Bernoulli: return 2.0 * p1_ * (1.0 - p1_);
            case Family::Lognormal:
                return 2.0 * mean() * (2.0 * special::normal_cdf(p2_ / std::sqrt(2.0)) - 1.0);
            case Family::PointMass: return 0.0;
            case Family::Poisson:
            case Family::NegativeBinomial: {
                // 2 sum_k F(k)(1 - F(k)) over the integer lattice
                double s = 0.0, F = 0.0;
                for (std::int64_t k = 0; k < 100000; ++k) {
                    F += pmf(k);
                    const double term = F * (1.0 - F);
                    s += term;
                    if (F > 0.999999 && term < 1e-18) break;
                }
                return 2.0 * s;
            }
            case Family::InverseGaussian: {
                auto f = [this](double x) {
                    const double F = cdf(x);
                    return F * (1.0 - F);
                };
                QuadratureConfig qc;
                qc.rel_tol = detail::kInnerRel * 10;
                qc.abs_tol = detail::kInnerAbs;
                return 2.0 * integrate_semi_infinite(f, qc).value;
            }
        }
        throw DomainError("bad family");
    }

    double population_stat(Stat stat) const {
        switch (stat) {
            case Stat::gini: {
                const double m = mean();
                if (m == 0.0) return 0.0;
                return gmd() / (2.0 * m);
            }
            case Stat::scv: {
                const double m = mean();
                if (m == 0.0) throw CapabilityError("SCV undefined for zero-mean law");
                return variance() / (m * m);
            }
            case Stat::theil: {
                const double m = mean();
                if (m == 0.0) return 0.0;
                if (family_ == Family::PointMass) return 0.0;
                if (support_kind() == SupportKind::discrete) {
                    double s = 0.0;
                    for (std::int64_t k = 1; k < 100000; ++k) {
                        const double p = pmf(k);
                        s += p * (k / m) * std::log(k / m);
                        if (k > m && p < 1e-18) break;
                    }
                    return s;
                }
                auto f = [this, m](double x) {
                    return density(x) * (x / m) * std::log(x / m);
                };
                QuadratureConfig qc;
                qc.rel_tol = 1e-10;
                qc.abs_tol = 1e-14;
                return integrate_semi_infinite(f, qc).value;
            }
        }
        throw DomainError("bad stat");
    }

    double sample_one(std::mt19937_64& rng) const {
        switch (family_) {
            case Family::Gamma:
                return std::gamma_distribution<double>(p1_, p2_)(rng);
            case Family::Exponential:
                return std::exponential_distribution<double>(p1_)(rng);
            case Family::Pareto: {
                std::uniform_real_distribution<double> u(0.0, 1.0);
                double v = u(rng);
                while (v <= 0.0) v = u(rng);
                return p2_ * std::pow(v, -1.0 / p1_);
            }
            case Family::Poisson:
                return double(std::poisson_distribution<std::int64_t>(p1_)(rng));
            case Family::Bernoulli:
                return std::bernoulli_distribution(p1_)(rng) ? 1.0 : 0.0;
            case Family::NegativeBinomial: {
                // gamma-Poisson mixture, valid for real r
                const double g =
                    std::gamma_distribution<double>(p1_, (1.0 - p2_) / p2_)(rng);
                if (g == 0.0) return 0.0;
                return double(std::poisson_distribution<std::int64_t>(g)(rng));
            }
            case Family::Lognormal:
                return std::lognormal_distribution<double>(p1_, p2_)(rng);
            case Family::InverseGaussian: {
                // Michael-Schucany-Haas
                const double mu = p1_, lw = p2_;
                std::normal_distribution<double> nd;
                std::uniform_real_distribution<double> ud(0.0, 1.0);
                const double nu = nd(rng);
                const double y = nu * nu;
                const double x = mu + mu * mu * y / (2.0 * lw) -
                                 mu / (2.0 * lw) *
                                     std::sqrt(4.0 * mu * lw * y + mu * mu * y * y);
                return ud(rng) <= mu / (mu + x) ? x : mu * mu / x;
            }
            case Family::PointMass: return p1_;
        }
        throw DomainError("bad family");
    }

    std::vector<double> sample(std::int64_t n, std::uint64_t seed) const {
        if (n < 1) throw ConfigError("sample requires n >= 1");
        auto rng = make_stream(seed);
        std::vector<double> out(n);
        for (auto& v : out) v = sample_one(rng);
        return out;
    }

    std::string to_string() const {
        std::ostringstream os;
        switch (family_) {
            case Family::Gamma: os << "gamma(shape=" << p1_ << ",scale=" << p2_ << ")"; break;
            case Family::Exponential: os << "exponential(rate=" << p1_ << ")"; break;
            case Family::Pareto: os << "pareto(shape=" << p1_ << ",xm=" << p2_ << ")"; break;
            case Family::Poisson: os << "poisson(mu=" << p1_ << ")"; break;
            case Family::Bernoulli: os << "bernoulli(p=" << p1_ << ")"; break;
            case Family::NegativeBinomial:
                os << "negative_binomial(r=" << p1_ << ",p=" << p2_ << ")";
                break;
            case Family::Lognormal: os << "lognormal(mu=" << p1_ << ",sigma=" << p2_ << ")"; break;
            case Family::InverseGaussian:
                os << "inverse_gaussian(mu=" << p1_ << ",lambda=" << p2_ << ")";
                break;
            case Family::PointMass: os << "pointmass(value=" << p1_ << ")"; break;
        }
        return os.str();
    }

    static DistributionSpec parse(const std::string& text);

    bool operator==(const DistributionSpec& o) const {
        return family_ == o.family_ && p1_ == o.p1_ && p2_ == o.p2_;
    }

private:
    DistributionSpec(Family f, double a, double b) : family_(f), p1_(a), p2_(b) {}
    static void require(bool ok, const char* msg) {
        if (!ok) throw DomainError(msg);
    }

    Family family_;
    double p1_, p2_;
};

// --- parsing: family(name=value,...) --------------------------------------

inline DistributionSpec DistributionSpec::parse(const std::string& text) {
    const auto open = text.find('(');
    std::string name = text.substr(0, open);
    for (auto& c : name) c = char(std::tolower(c));
    std::vector<std::pair<std::string, double>> kv;
    std::vector<double> positional;
    if (open != std::string::npos) {
        const auto close = text.rfind(')');
        if (close == std::string::npos || close < open)
            throw ConfigError("unbalanced parentheses in distribution spec: " + text);
        std::string args = text.substr(open + 1, close - open - 1);
        std::istringstream is(args);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            const auto eq = tok.find('=');
            try {
                if (eq == std::string::npos) {
                    positional.push_back(std::stod(tok));
                } else {
                    std::string key = tok.substr(0, eq);
                    key.erase(0, key.find_first_not_of(" \t"));
                    key.erase(key.find_last_not_of(" \t") + 1);
                    for (auto& c : key) c = char(std::tolower(c));
                    kv.emplace_back(key, std::stod(tok.substr(eq + 1)));
                }
            } catch (const std::invalid_argument&) {
                throw ConfigError("bad parameter in distribution spec: " + tok);
            }
        }
    }
    auto get = [&](const std::string& key, int pos, std::optional<double> def =
                                                       std::nullopt) -> double {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        if (pos >= 0 && pos < int(positional.size())) return positional[pos];
        if (def) return *def;
        throw ConfigError("missing parameter '" + key + "' in distribution spec: " + text);
    };
    if (name == "gamma") return gamma(get("shape", 0), get("scale", 1, 1.0));
    if (name == "exponential" || name == "exp") return exponential(get("rate", 0, 1.0));
    if (name == "pareto") return pareto(get("shape", 0), get("xm", 1, 1.0));
    if (name == "poisson") return poisson(get("mu", 0));
    if (name == "bernoulli") return bernoulli(get("p", 0));
    if (name == "negative_binomial" || name == "negbinomial" || name == "nbinom")
        return negative_binomial(get("r", 0), get("p", 1));
    if (name == "lognormal") return lognormal(get("mu", 0, 0.0), get("sigma", 1, 1.0));
    if (name == "inverse_gaussian" || name == "invgauss")
        return inverse_gaussian(get("mu", 0), get("lambda", 1, 1.0));
    if (name == "pointmass" || name == "point_mass") return point_mass(get("value", 0));
    throw ConfigError("unknown distribution family: " + name);
}

// --- exponentially tilted view --------------------------------------------

struct TiltedMomentSet {
    double mean = 0.0;
    double variance = 0.0;
    double gmd = 0.0;
    double xi1 = 0.0;
    double xi0 = 0.0; // = gmd^2
    double xi2 = 0.0; // = 2 variance
    double xi1_std_error = 0.0;
};

class TiltedView {
public:
    TiltedView(DistributionSpec base, double lambda) : base_(base), lambda_(lambda) {
        if (lambda < 0.0) throw DomainError("tilt parameter must be >= 0");
    }

    const DistributionSpec& base() const { return base_; }
    double lambda() const { return lambda_; }

    // The tilted law expressed inside the catalog, when the family is closed
    // under tilting.
    std::optional<DistributionSpec> closed_form() const {
        const double lam = lambda_;
        switch (base_.family()) {
            case Family::Gamma: {
                const double th = base_.param2();
                return DistributionSpec::gamma(base_.param1(), th / (1.0 + th * lam));
            }
            case Family::Exponential:
                return DistributionSpec::exponential(base_.param1() + lam);
            case Family::Poisson: {
                const double mt = base_.param1() * std::exp(-lam);
                if (mt == 0.0) return DistributionSpec::point_mass(0.0); // tilt beyond underflow
                return DistributionSpec::poisson(mt);
            }
            case Family::Bernoulli: {
                const double p = base_.param1();
                const double w = p * std::exp(-lam);
                if (p == 0.0 || p == 1.0) return DistributionSpec::bernoulli(p);
                return DistributionSpec::bernoulli(w / (1.0 - p + w));
            }
            case Family::NegativeBinomial: {
                const double q = (1.0 - base_.param2()) * std::exp(-lam);
                if (q == 0.0) return DistributionSpec::point_mass(0.0);
                return DistributionSpec::negative_binomial(base_.param1(), 1.0 - q);
            }
            case Family::InverseGaussian: {
                const double mu = base_.param1(), lw = base_.param2();
                const double mt = mu / std::sqrt(1.0 + 2.0 * mu * mu * lam / lw);
                return DistributionSpec::inverse_gaussian(mt, lw);
            }
            case Family::PointMass:
                return base_;
            default:
                return std::nullopt;
        }
    }

    double moment(int j) const {
        if (j == 0) return 1.0;
        if (lambda_ == 0.0) return base_.moment(j);
        if (auto cf = closed_form()) return cf->moment(j);
        switch (base_.family()) {
            case Family::Pareto: {
                const double a = base_.param1(), xm = base_.param2();
                const double lam = lambda_ * xm;
                return std::pow(xm, j) * std::exp(detail::pareto_log_exp_moment(j, a, lam) -
                                                  detail::pareto_log_exp_moment(0, a, lam));
            }
            case Family::Lognormal: {
                const double mu = base_.param1(), sg = base_.param2(), lam = lambda_;
                auto f = [mu, sg, lam, j](double z) {
                    return std::exp(-0.5 * z * z + j * (mu + sg * z) -
                                    lam * std::exp(mu + sg * z)) /
                           std::sqrt(2.0 * M_PI);
                };
                auto num = integrate_finite(f, -37.0, 16.0 + 3.0 * sg, detail::kInnerRel,
                                            detail::kInnerAbs, 4000);
                return num.value / std::exp(base_.log_laplace(lam));
            }
            default:
                throw CapabilityError("tilted moment not implemented for family");
        }
    }

    double mean() const { return moment(1); }
    double variance() const {
        const double m = mean();
        const double v = moment(2) - m * m;
        return v > 0.0 ? v : 0.0;
    }

    double cdf(double x) const {
        if (lambda_ == 0.0) return base_.cdf(x);
        if (auto cf = closed_form()) return cf->cdf(x);
        switch (base_.family()) {
            case Family::Pareto: {
                const double a = base_.param1(), xm = base_.param2();
                if (x < xm) return 0.0;
                const double lam = lambda_ * xm;
                const double xr = x / xm;
                if (lam >= 30.0) {
                    const double lt = detail::pareto_log_tail(a, lam, xr);
                    const double l0 = detail::pareto_log_tail(a, lam, 1.0);
                    return 1.0 - std::exp(lt - l0);
                }
                if (!ptable_) ptable_ = std::make_shared<detail::ParetoTailTable>(a, lam);
                const double tot = ptable_->total();
                const double w = lam * xr >= 30.0
                                     ? std::exp(detail::pareto_log_tail(a, lam, xr))
                                     : ptable_->value(std::pow(xr, -a));
                return 1.0 - std::min(1.0, w / tot);
            }
            case Family::Lognormal: {
                if (x <= 0.0) return 0.0;
                const double mu = base_.param1(), sg = base_.param2(), lam = lambda_;
                const double zmax = (std::log(x) - mu) / sg;
                auto f = [mu, sg, lam](double z) {
                    return std::exp(-0.5 * z * z - lam * std::exp(mu + sg * z)) /
                           std::sqrt(2.0 * M_PI);
                };
                auto num = integrate_finite(f, -37.0, std::min(zmax, 16.0),
                                            detail::kInnerRel, detail::kInnerAbs, 4000);
                return std::min(1.0, num.value / std::exp(base_.log_laplace(lam)));
            }
            default:
                throw CapabilityError("tilted cdf not implemented for family");
        }
    }

    // GMD(F^(lambda)) via closed forms where the tilt is a scale change,
    // otherwise the single-integral identity GMD = 2 int F(1-F).
    double gmd() const {
        if (lambda_ == 0.0) return base_.gmd();
        if (auto cf = closed_form()) return cf->gmd();
        switch (base_.family()) {
            case Family::Pareto: {
                const double a = base_.param1(), xm = base_.param2();
                const double lam = lambda_ * xm;
                if (lam < 30.0) {
                    // u = (x/xm)^{-a} maps the tail identity onto (0,1):
                    //   GMD = (2 xm / (a N^2)) int_0^1 (N - C(u)) C(u) u^{-1/a-1} du
                    if (!ptable_) ptable_ = std::make_shared<detail::ParetoTailTable>(a, lam);
                    const double N = ptable_->total();
                    const auto& tbl = *ptable_;
                    auto f = [&tbl, a, N](double u) {
                        const double C = tbl.value(u);
                        return (N - C) * C * std::pow(u, -1.0 / a - 1.0);
                    };
                    const auto r = integrate_finite(f, 0.0, 1.0, 1e-9, detail::kInnerAbs, 4000);
                    return 2.0 * xm / (a * N * N) * r.value;
                }
                auto f = [this, xm](double s) {
                    const double F = cdf(xm + s);
                    return F * (1.0 - F);
                };
                QuadratureConfig qc;
                qc.rel_tol = 1e-9;
                qc.abs_tol = detail::kInnerAbs;
                return 2.0 * integrate_semi_infinite(f, qc).value;
            }
            case Family::Lognormal: {
                auto f = [this](double x) {
                    const double F = cdf(x);
                    return F * (1.0 - F);
                };
                QuadratureConfig qc;
                qc.rel_tol = 1e-9;
                qc.abs_tol = detail::kInnerAbs;
                return 2.0 * integrate_semi_infinite(f, qc).value;
            }
            default:
                throw CapabilityError("tilted gmd not implemented for family");
        }
    }

    // Quantile of the tilted law (bisection on cdf; discrete laws step-search).
    double quantile(double u) const {
        if (auto cf = closed_form()) {
            switch (cf->family()) {
                case Family::Gamma:
                    return cf->param2() * special::gamma_quantile(cf->param1(), u);
                case Family::Exponential:
                    return -std::log1p(-u) / cf->param1();
                case Family::PointMass:
                    return cf->param1();
                default: break;
            }
            if (cf->support_kind() == SupportKind::discrete) {
                double F = 0.0;
                for (std::int64_t k = 0; k < 1000000; ++k) {
                    F += cf->pmf(k);
                    if (F >= u) return double(k);
                }
                throw DomainError("discrete quantile search exhausted");
            }
        }
        // continuous numeric bisection
        double lo = base_.family() == Family::Pareto ? base_.param2() : 0.0;
        double hi = std::max(1.0, lo * 2.0 + 1.0);
        while (cdf(hi) < u && hi < 1e300) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (cdf(mid) < u)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-12 * (1.0 + hi)) break;
        }
        return 0.5 * (lo + hi);
    }

    // E|X1-X2||X1-X3| under the tilted law by deterministic Halton sampling
    // through the quantile transform.  Returns (estimate, std error proxy).
    std::pair<double, double> xi1_qmc(std::int64_t points = 1 << 14) const {
        MeanAccumulator acc;
        for (std::int64_t i = 0; i < points; ++i) {
            const double x1 = quantile(clamp01(halton(i, 2)));
            const double x2 = quantile(clamp01(halton(i, 3)));
            const double x3 = quantile(clamp01(halton(i, 5)));
            acc.add(std::fabs(x1 - x2) * std::fabs(x1 - x3));
        }
        return {acc.mean(), acc.std_error()};
    }

private:
    static double clamp01(double u) { return std::min(std::max(u, 1e-12), 1.0 - 1e-12); }
    DistributionSpec base_;
    double lambda_;
    mutable std::shared_ptr<const detail::ParetoTailTable> ptable_;
};

// g(lambda) = GMD(F^(lambda)) / GMD(F).
inline double gmd_scaling_g(const DistributionSpec& dist, double lambda) {
    const double base = dist.gmd();
    if (!(base > 0.0)) throw DomainError("gmd_scaling_g requires GMD(F) > 0");
    switch (dist.family()) {
        case Family::Gamma:
            return 1.0 / (1.0 + dist.param2() * lambda);
        case Family::Exponential:
            return dist.param1() / (dist.param1() + lambda);
        default:
            return TiltedView(dist, lambda).gmd() / base;
    }
}

enum class MomentKind { mean, variance, gmd, xi1 };

inline TiltedMomentSet tilted_moments(const TiltedView& view,
                                      std::initializer_list<MomentKind> which) {
    TiltedMomentSet out;
    bool need_var = false, need_gmd = false;
    for (auto k : which) {
        switch (k) {
            case MomentKind::mean: out.mean = view.mean(); break;
            case MomentKind::variance: need_var = true; break;
            case MomentKind::gmd: need_gmd = true; break;
            case MomentKind::xi1: {
                auto [v, se] = view.xi1_qmc();
                out.xi1 = v;
                out.xi1_std_error = se;
                break;
            }
        }
    }
    if (need_var) {
        out.variance = view.variance();
        out.xi2 = 2.0 * out.variance;
    }
    if (need_gmd) {
        out.gmd = view.gmd();
        out.xi0 = out.gmd * out.gmd;
    }
    return out;
}

} // namespace snm
