#include "wdro/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace wdro {

namespace {

const double kLog2 = std::log(2.0);

double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

// Lower regularized series; valid and fast for v < s + 1.
double lower_gamma_series(double s, double v) {
    double term = 1.0 / s;
    double sum = term;
    double denom = s;
    for (int k = 0; k < 500; ++k) {
        denom += 1.0;
        term *= v / denom;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-v + s * std::log(v));
}

// Continued fraction (modified Lentz); valid for v >= s + 1.
double upper_gamma_cf(double s, double v) {
    const double tiny = 1e-300;
    double b = v + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-v + s * std::log(v)) * h;
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, eps * 0.5, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, eps * 0.5, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, b, fa, fm, fb);
    const double eps = std::max(std::abs(whole), 1.0) * rel_tol;
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, 40);
}

BoundReport assemble(std::string name, std::vector<std::pair<std::string, double>> inputs,
                     std::vector<std::pair<std::string, double>> terms, double m_cap) {
    BoundReport report;
    report.bound_name = std::move(name);
    report.inputs = std::move(inputs);
    report.terms = std::move(terms);
    double total = 0.0;
    for (const auto& [_, v] : report.terms) total += v;
    report.value = total;
    report.vacuous = std::isfinite(m_cap) && total > m_cap;
    return report;
}

} // namespace

double upper_incomplete_gamma(double s, double v) {
    if (s <= 0.0 || v < 0.0) throw data_error("upper_incomplete_gamma requires s > 0, v >= 0");
    if (v == 0.0) return std::tgamma(s);
    if (v < s + 1.0) return std::tgamma(s) - lower_gamma_series(s, v);
    return upper_gamma_cf(s, v);
}

EntropyProfile EntropyProfile::finite(double class_size, double sup_diameter) {
    if (class_size < 1.0) throw data_error("finite class size must be >= 1");
    if (sup_diameter < 0.0) throw data_error("class diameter must be nonnegative");
    EntropyProfile p;
    p.kind = Kind::finite_class;
    p.class_size = class_size;
    p.sup_diameter = sup_diameter;
    p.comp_value = comp_entropy_integral(p);
    return p;
}

EntropyProfile EntropyProfile::network(int dim, double r0, double label_bound, double s_sup,
                                       double ds_sup) {
    EntropyProfile p;
    p.kind = Kind::euclidean_ball_lipschitz;
    p.dim = dim;
    p.r0 = r0;
    p.label_bound = label_bound;
    p.s_sup = s_sup;
    p.ds_sup = ds_sup;
    p.comp_value = comp_entropy_integral(p);
    return p;
}

EntropyProfile EntropyProfile::rkhs(int dim, double r0, double label_bound, double sigma,
                                    double rkhs_radius) {
    if (sigma <= 0.0) throw data_error("kernel width must be positive");
    EntropyProfile p;
    p.kind = Kind::gaussian_rkhs;
    p.dim = dim;
    p.r0 = r0;
    p.label_bound = label_bound;
    p.sigma = sigma;
    p.rkhs_radius = rkhs_radius;
    p.comp_value = comp_entropy_integral(p);
    return p;
}

EntropyProfile EntropyProfile::explicit_covering(std::vector<std::pair<double, double>> table) {
    if (table.empty()) throw data_error("covering table must be nonempty");
    if (table.front().first != 0.0) throw data_error("covering table must start at u = 0");
    for (std::size_t k = 0; k < table.size(); ++k) {
        if (table[k].second < 1.0) throw data_error("covering numbers must be >= 1");
        if (k > 0 && table[k].first <= table[k - 1].first)
            throw data_error("covering table scales must be strictly increasing");
        if (k > 0 && table[k].second > table[k - 1].second)
            throw data_error("covering numbers must be nonincreasing in u");
    }
    if (table.back().second != 1.0)
        throw data_error("covering table must reach N = 1 at its last scale");
    EntropyProfile p;
    p.kind = Kind::explicit_table;
    p.table = std::move(table);
    p.comp_value = comp_entropy_integral(p);
    return p;
}

double comp_entropy_integral(const EntropyProfile& profile) {
    switch (profile.kind) {
    case EntropyProfile::Kind::finite_class:
        return profile.sup_diameter * std::sqrt(std::log(profile.class_size));
    case EntropyProfile::Kind::euclidean_ball_lipschitz: {
        const double d_scale =
            2.0 * profile.r0 * (profile.label_bound + profile.s_sup) * profile.ds_sup;
        return 1.5 * d_scale * std::sqrt(static_cast<double>(profile.dim));
    }
    case EntropyProfile::Kind::gaussian_rkhs: {
        const double d = static_cast<double>(profile.dim);
        const double r = profile.rkhs_radius;
        const double B = profile.label_bound;
        const double c1 = 48.0 * std::sqrt(d) *
                          (2.0 * upper_incomplete_gamma(0.5 * (d + 3.0), kLog2) +
                           std::pow(kLog2, 0.5 * (d + 1.0))) *
                          std::pow(32.0 + 2560.0 * d * profile.r0 * profile.r0 /
                                              (profile.sigma * profile.sigma),
                                   0.5 * (d + 1.0));
        return c1 / 48.0 * (r * r + B * r);
    }
    case EntropyProfile::Kind::explicit_table: {
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < profile.table.size(); ++k) {
            const double n_here = profile.table[k].second;
            if (n_here <= 1.0) continue;
            const auto integrand = [n_here](double) { return std::sqrt(std::log(n_here)); };
            total += adaptive_simpson(integrand, profile.table[k].first,
                                      profile.table[k + 1].first, 1e-6);
        }
        return total;
    }
    }
    throw data_error("unsupported entropy profile kind");
}

double BoundReport::term(const std::string& name) const {
    for (const auto& [k, v] : terms)
        if (k == name) return v;
    throw internal_error("bound report has no term '" + name + "'");
}

double sandwich_lipschitz(double lipschitz, double rho) {
    if (lipschitz < 0.0 || rho < 0.0) throw data_error("sandwich inputs must be nonnegative");
    return 2.0 * lipschitz * rho;
}

double sandwich_regression(double label_bound, double predictor_sup, double predictor_lipschitz,
                           double rho, double sigma_sup) {
    if (label_bound < 0.0 || predictor_sup < 0.0 || predictor_lipschitz < 0.0 || rho < 0.0 ||
        sigma_sup < 0.0)
        throw data_error("sandwich inputs must be nonnegative");
    return 4.0 * rho * (label_bound + predictor_sup) * (1.0 + predictor_lipschitz * sigma_sup);
}

BoundReport data_dependent_risk_bound(const std::vector<std::pair<double, double>>& lambda_grid,
                                      double rho, double p, double M, double comp, std::size_t n,
                                      double t) {
    if (lambda_grid.empty()) throw data_error("empty lambda grid");
    if (n < 1) throw data_error("sample size must be >= 1");
    if (t <= 0.0) throw data_error("deviation parameter t must be positive");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double grid_min = std::numeric_limits<double>::infinity();
    double grid_argmin = lambda_grid.front().first;
    for (const auto& [lambda, mean_phi] : lambda_grid) {
        if (lambda < 0.0) throw data_error("lambda grid entries must be nonnegative");
        const double v = (lambda + 1.0) * pow_p(rho, p) + mean_phi +
                         M * std::sqrt(std::log(lambda + 1.0)) / sqrt_n;
        if (v < grid_min) {
            grid_min = v;
            grid_argmin = lambda;
        }
    }
    BoundReport report = assemble(
        "data_dependent_risk_bound",
        {{"rho", rho}, {"p", p}, {"M", M}, {"comp", comp}, {"n", static_cast<double>(n)},
         {"t", t}, {"lambda_argmin", grid_argmin}},
        {{"grid_min", grid_min},
         {"entropy", 24.0 * comp / sqrt_n},
         {"deviation", M * t / sqrt_n}},
        M);
    report.failure_probability = 2.0 * std::exp(-2.0 * t * t);
    return report;
}

BoundReport lipschitz_excess_bound(double comp, double lipschitz, double diam, double rho,
                                   double p, double M, std::size_t n, double delta) {
    if (n < 1) throw data_error("sample size must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw data_error("delta must lie in (0,1)");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    BoundReport report = assemble(
        "lipschitz_excess_bound",
        {{"comp", comp}, {"L", lipschitz}, {"diam", diam}, {"rho", rho}, {"p", p}, {"M", M},
         {"n", static_cast<double>(n)}, {"delta", delta}},
        {{"entropy", 48.0 * comp / sqrt_n},
         {"smoothness", 48.0 * lipschitz * pow_p(diam, p) / (sqrt_n * std::pow(rho, p - 1.0))},
         {"confidence", 3.0 * M * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)))}},
        M);
    report.failure_probability = delta;
    return report;
}

BoundReport anchored_excess_bound(double comp, double c0, double diam, double rho, double p,
                                  double M, std::size_t n, double delta) {
    if (n < 1) throw data_error("sample size must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw data_error("delta must lie in (0,1)");
    if (rho <= 0.0) throw data_error("anchored bound requires rho > 0");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    BoundReport report = assemble(
        "anchored_excess_bound",
        {{"comp", comp}, {"C0", c0}, {"diam", diam}, {"rho", rho}, {"p", p}, {"M", M},
         {"n", static_cast<double>(n)}, {"delta", delta}},
        {{"entropy", 48.0 * comp / sqrt_n},
         {"anchor", 24.0 * c0 * pow_p(2.0 * diam, p) / sqrt_n * (1.0 + pow_p(diam / rho, p))},
         {"confidence", 3.0 * M * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)))}},
        M);
    report.failure_probability = delta;
    return report;
}

BoundReport surrogate_rademacher_bound(double comp, double c0, double diam, double rho, double p,
                                       std::size_t n) {
    if (n < 1) throw data_error("sample size must be >= 1");
    if (rho <= 0.0) throw data_error("surrogate Rademacher bound requires rho > 0");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    return assemble(
        "surrogate_rademacher_bound",
        {{"comp", comp}, {"C0", c0}, {"diam", diam}, {"rho", rho}, {"p", p},
         {"n", static_cast<double>(n)}},
        {{"entropy", 24.0 * comp / sqrt_n},
         {"anchor", 12.0 * c0 * pow_p(2.0 * diam, p) / sqrt_n * (1.0 + pow_p(diam / rho, p))}},
        std::numeric_limits<double>::infinity());
}

ClassConstants network_class_constants(int dim, double r0, double label_bound, double s_sup,
                                       double ds_sup, std::size_t n, double delta) {
    if (n < 1) throw data_error("sample size must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw data_error("delta must lie in (0,1)");
    ClassConstants c;
    const double B = label_bound;
    c.lipschitz = 2.0 * std::sqrt(2.0) * (B + s_sup) * (1.0 + ds_sup);
    c.upper_bound = (s_sup + B) * (s_sup + B);
    c.c1 = (B + s_sup) * (144.0 * r0 * std::sqrt(static_cast<double>(dim)) * ds_sup +
                          192.0 * (1.0 + ds_sup) * std::sqrt(2.0 * (r0 * r0 + B * B)));
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    c.bound = assemble(
        "network_class_excess_bound",
        {{"d", static_cast<double>(dim)}, {"r0", r0}, {"B", B}, {"s_sup", s_sup},
         {"ds_sup", ds_sup}, {"n", static_cast<double>(n)}, {"delta", delta}},
        {{"c1_term", c.c1 / sqrt_n},
         {"confidence", 3.0 * (s_sup + B) * (s_sup + B) * std::sqrt(std::log(2.0 / delta)) /
                            std::sqrt(2.0 * static_cast<double>(n))}},
        c.upper_bound);
    c.bound.failure_probability = delta;
    return c;
}

ClassConstants rkhs_class_constants(int dim, double r0, double label_bound, double sigma,
                                    double rkhs_radius, std::size_t n, double delta) {
    if (n < 1) throw data_error("sample size must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw data_error("delta must lie in (0,1)");
    if (sigma <= 0.0) throw data_error("kernel width must be positive");
    ClassConstants c;
    const double B = label_bound;
    const double r = rkhs_radius;
    const double d = static_cast<double>(dim);
    c.lipschitz = 2.0 * std::sqrt(2.0) * (r + B) * (1.0 + r * std::sqrt(2.0) / sigma);
    c.upper_bound = 2.0 * (r * r + B * B);
    c.c1 = 48.0 * std::sqrt(d) *
           (2.0 * upper_incomplete_gamma(0.5 * (d + 3.0), kLog2) + std::pow(kLog2, 0.5 * (d + 1.0))) *
           std::pow(32.0 + 2560.0 * d * r0 * r0 / (sigma * sigma), 0.5 * (d + 1.0));
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    c.bound = assemble(
        "rkhs_class_excess_bound",
        {{"d", d}, {"r0", r0}, {"B", B}, {"sigma", sigma}, {"r", r},
         {"n", static_cast<double>(n)}, {"delta", delta}},
        {{"c1_term", c.c1 * (r * r + B * r) / sqrt_n},
         {"lipschitz_term", 192.0 * std::sqrt(2.0) * (r + B) * (1.0 + r * std::sqrt(2.0) / sigma) *
                                std::sqrt(r0 * r0 + B * B) / sqrt_n},
         {"confidence", 6.0 * (r * r + B * B) * std::sqrt(std::log(2.0 / delta)) /
                            std::sqrt(2.0 * static_cast<double>(n))}},
        c.upper_bound);
    c.bound.failure_probability = delta;
    return c;
}

} // namespace wdro
