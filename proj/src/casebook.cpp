#include "wdro/casebook.hpp"

#include <cmath>

#include "wdro/dataset.hpp"
#include "wdro/rng.hpp"

namespace wdro {
namespace casebook {

InstanceSpace space() { return InstanceSpace::interval(2.0); }

HypothesisClass hypothesis_class(double alpha) {
    if (alpha <= 1.0) throw data_error("the step example needs alpha > 1");
    HypothesisClass cls;

    Hypothesis f0 = Hypothesis::constant(1.0, "f0");
    cls.members.push_back(std::move(f0));

    Hypothesis f1;
    f1.family_tag = "f1";
    f1.evaluate = [alpha](const Point& z) { return z.features[0] >= 1.0 ? alpha : 0.0; };
    f1.upper_bound = alpha;
    // f1(z) <= alpha * |z - 0|^p for every p >= 1 (the step sits at z >= 1).
    SmoothAnchor anchor;
    anchor.c0 = alpha;
    anchor.anchor = Point::scalar(0.0);
    f1.smooth_anchor = anchor;
    cls.members.push_back(std::move(f1));

    cls.upper_bound = alpha;
    cls.smooth_anchor = anchor;
    cls.entropy_profile = EntropyProfile::finite(2.0, alpha);
    return cls;
}

EmpiricalDistribution population_grid(std::size_t atoms) {
    if (atoms == 0) throw data_error("grid size must be positive");
    std::vector<Point> pts;
    pts.reserve(atoms);
    for (std::size_t k = 0; k < atoms; ++k)
        pts.push_back(Point::scalar((static_cast<double>(k) + 0.5) / static_cast<double>(atoms)));
    return EmpiricalDistribution::uniform(std::move(pts));
}

RegimeValue analytic_population_worst_case(const IllustrativeInstance& inst) {
    RegimeValue out;
    if (inst.rho == 0.0) return out; // zero budget, zero risk
    const double p = inst.p;
    const double beta = 1.0 - std::pow(p + 1.0, 1.0 / (p + 1.0)) * std::pow(inst.rho, p / (p + 1.0));
    out.value = inst.alpha * std::pow(p + 1.0, 1.0 / (p + 1.0)) * std::pow(inst.rho, p / (p + 1.0));
    if (beta < 0.0) {
        out.in_regime = false;
        out.note = "transport segment exceeds [0,1] (beta < 0)";
    }
    return out;
}

RegimeValue analytic_empirical_worst_case(const IllustrativeInstance& inst,
                                          const EmpiricalDistribution& sample) {
    sample.validate();
    RegimeValue out;
    double max_z = sample.support[0].features[0];
    for (const Point& z : sample.support) max_z = std::max(max_z, z.features[0]);
    if (max_z >= 1.0) throw data_error("sample must lie in [0,1)");
    if (inst.rho == 0.0) return out;
    const double gap = 1.0 - max_z;
    const double gamma = std::pow(inst.rho, inst.p) / std::pow(gap, inst.p);
    out.value = inst.alpha * gamma;
    const double n = static_cast<double>(sample.size());
    if (inst.rho > gap * std::pow(n, -1.0 / inst.p)) {
        out.in_regime = false;
        out.note = "budget overfills the top atom (rho > (1 - max Z) n^{-1/p})";
    }
    return out;
}

RegimeValue selection_probability(const IllustrativeInstance& inst) {
    RegimeValue out;
    const double edge = inst.rho * std::pow(inst.alpha, 1.0 / inst.p);
    if (edge > 1.0) throw data_error("selection probability needs rho <= alpha^{-1/p}");
    out.value = std::pow(1.0 - edge, static_cast<double>(inst.n));
    if (static_cast<double>(inst.n) > inst.alpha) {
        out.in_regime = false;
        out.note = "n > alpha: the LP optimum can use more than one atom";
    }
    return out;
}

RegimeValue excess_risk_profile(const IllustrativeInstance& inst) {
    RegimeValue out;
    const double p = inst.p;
    const double lower = std::pow(p + 1.0, -1.0 / p) * std::pow(inst.alpha, -(p + 1.0) / p);
    const double upper = (1.0 - std::pow(inst.delta, 1.0 / static_cast<double>(inst.n))) *
                         std::pow(inst.alpha, -1.0 / p);
    if (inst.rho < lower || inst.rho > upper) {
        out.value = 0.0;
        out.note = inst.rho < lower ? "below the nontrivial-excess regime"
                                    : "above the nontrivial-excess regime";
        return out;
    }
    out.value =
        inst.alpha * std::pow(p + 1.0, 1.0 / (p + 1.0)) * std::pow(inst.rho, p / (p + 1.0)) - 1.0;
    return out;
}

RegimeValue worst_alpha(double rho, double delta, std::size_t n, double p) {
    if (rho <= 0.0) throw data_error("worst_alpha requires rho > 0");
    if (delta <= 0.0 || delta >= 1.0) throw data_error("delta must lie in (0,1)");
    RegimeValue out;
    out.value = std::pow(1.0 - std::pow(delta, 1.0 / static_cast<double>(n)), p) * std::pow(rho, -p);
    if (out.value <= 1.0) {
        out.in_regime = false;
        out.note = "constructed alpha <= 1, outside the example's parameter range";
    }
    return out;
}

SelectionSimulation simulate_selection(const IllustrativeInstance& inst, std::size_t trials,
                                       std::uint64_t seed) {
    if (trials == 0) throw data_error("trial count must be positive");
    const InstanceSpace z_space = space();
    const HypothesisClass cls = hypothesis_class(inst.alpha);
    const AmbiguityBall ball(inst.p, inst.rho);

    SelectionSimulation sim;
    sim.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const EmpiricalDistribution sample =
            sample_uniform_interval(inst.n, Rng::substream(seed, t));
        std::vector<Point> candidates = sample.support;
        candidates.push_back(Point::scalar(1.0));
        const ErmResult result = minimax_erm(cls, sample, ball, candidates, z_space);
        if (result.selected == 1) ++sim.f1_selected;
    }
    sim.frequency = static_cast<double>(sim.f1_selected) / static_cast<double>(trials);
    return sim;
}

} // namespace casebook
} // namespace wdro
