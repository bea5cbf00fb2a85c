#include "wdro/adaptation.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "wdro/rng.hpp"

namespace wdro {
namespace adaptation {

namespace {

double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

} // namespace

std::vector<double> Transform::apply(const std::vector<double>& x) const {
    std::vector<double> y = x;
    switch (kind) {
    case Kind::identity:
        break;
    case Kind::shift:
        for (std::size_t k = 0; k < y.size(); ++k) y[k] += shift[k];
        break;
    case Kind::affine:
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = scale[k] * y[k] + shift[k];
        break;
    case Kind::cubic:
        for (double& v : y) v = v * v * v;
        break;
    }
    return y;
}

std::vector<double> Transform::inverse(const std::vector<double>& y) const {
    std::vector<double> x = y;
    switch (kind) {
    case Kind::identity:
        break;
    case Kind::shift:
        for (std::size_t k = 0; k < x.size(); ++k) x[k] -= shift[k];
        break;
    case Kind::affine:
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = (x[k] - shift[k]) / scale[k];
        break;
    case Kind::cubic:
        for (double& v : x) v = std::cbrt(v);
        break;
    }
    return x;
}

void Transform::validate(int dim) const {
    const std::size_t d = static_cast<std::size_t>(dim);
    if (kind == Kind::shift && shift.size() != d)
        throw data_error("shift vector must have one entry per feature dimension");
    if (kind == Kind::affine) {
        if (shift.size() != d || scale.size() != d)
            throw data_error("affine transform needs scale and shift per dimension");
        for (double s : scale)
            if (s == 0.0) throw data_error("affine transform with zero scale is not invertible");
    }
}

double LabelRule::sample(const std::vector<double>& x, Rng& rng) const {
    double y = value;
    if (kind == Kind::linear) {
        y = bias;
        for (std::size_t k = 0; k < weights.size(); ++k) y += weights[k] * x[k];
    }
    if (noise > 0.0) y += rng.next_uniform(-noise, noise);
    return y;
}

double LabelRule::bound(const std::vector<double>& lo, const std::vector<double>& hi) const {
    if (kind == Kind::constant) return std::abs(value) + noise;
    double worst = std::abs(bias);
    for (std::size_t k = 0; k < weights.size(); ++k)
        worst += std::abs(weights[k]) * std::max(std::abs(lo[k]), std::abs(hi[k]));
    return worst + noise;
}

void DriftScenario::validate() const {
    if (dim < 1) throw data_error("scenario dimension must be positive");
    if (p < 1.0) throw data_error("scenario metric order must be >= 1");
    const std::size_t d = static_cast<std::size_t>(dim);
    if (feature_low.size() != d || feature_high.size() != d)
        throw data_error("feature box bounds must have one entry per dimension");
    for (std::size_t k = 0; k < d; ++k)
        if (feature_low[k] > feature_high[k]) throw data_error("feature box is empty");
    transform.validate(dim);
    if (label.kind == LabelRule::Kind::linear && label.weights.size() != d)
        throw data_error("label weights must have one entry per dimension");
}

namespace {

// Smallest Euclidean ball (around the origin) covering the source box and
// its image under the transform; componentwise monotone transforms map box
// corners to extremes.
double scenario_feature_radius(const DriftScenario& sc) {
    double sum = 0.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(sc.dim); ++k) {
        double reach = std::max(std::abs(sc.feature_low[k]), std::abs(sc.feature_high[k]));
        const auto lo_img = sc.transform.apply(sc.feature_low);
        const auto hi_img = sc.transform.apply(sc.feature_high);
        reach = std::max({reach, std::abs(lo_img[k]), std::abs(hi_img[k])});
        sum += reach * reach;
    }
    return std::sqrt(sum);
}

} // namespace

InstanceSpace DriftScenario::product_space() const {
    validate();
    return InstanceSpace::lp_product(dim, p, scenario_feature_radius(*this),
                                     label.bound(feature_low, feature_high));
}

InstanceSpace DriftScenario::feature_space() const {
    validate();
    return InstanceSpace::feature_only(dim, p, scenario_feature_radius(*this));
}

DriftData generate_drift(const DriftScenario& scenario, std::size_t n, std::size_t m,
                         std::size_t test_count, std::uint64_t seed) {
    scenario.validate();
    if (n < 1 || m < 1 || test_count < 1) throw data_error("sample counts must be at least 1");
    const std::size_t d = static_cast<std::size_t>(scenario.dim);

    const auto draw_features = [&](Rng& rng) {
        std::vector<double> x(d);
        for (std::size_t k = 0; k < d; ++k)
            x[k] = rng.next_uniform(scenario.feature_low[k], scenario.feature_high[k]);
        return x;
    };

    DriftData data;
    {
        Rng rng(Rng::substream(seed, 0));
        std::vector<Point> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto x = draw_features(rng);
            const double y = scenario.label.sample(x, rng);
            pts.push_back(Point::labeled(std::move(x), y));
        }
        data.labeled_source = EmpiricalDistribution::uniform(std::move(pts));
    }
    {
        Rng rng(Rng::substream(seed, 1));
        std::vector<Point> pts;
        pts.reserve(m);
        for (std::size_t i = 0; i < m; ++i)
            pts.push_back(Point::unlabeled(scenario.transform.apply(draw_features(rng))));
        data.target_features = EmpiricalDistribution::uniform(std::move(pts));
    }
    {
        Rng rng(Rng::substream(seed, 2));
        std::vector<Point> pts;
        pts.reserve(test_count);
        for (std::size_t i = 0; i < test_count; ++i) {
            auto x = draw_features(rng);
            auto xprime = scenario.transform.apply(x);
            // Labels come from the shared conditional at the pre-image of x'.
            const double y = scenario.label.sample(scenario.transform.inverse(xprime), rng);
            pts.push_back(Point::labeled(std::move(xprime), y));
        }
        data.target_test = EmpiricalDistribution::uniform(std::move(pts));
    }
    return data;
}

EmpiricalDistribution feature_marginal(const EmpiricalDistribution& labeled) {
    EmpiricalDistribution out;
    out.weights = labeled.weights;
    out.support.reserve(labeled.size());
    for (const Point& z : labeled.support) out.support.push_back(Point::unlabeled(z.features));
    return out;
}

WassersteinResult feature_wasserstein(const EmpiricalDistribution& source_features,
                                      const EmpiricalDistribution& target_features, double p,
                                      const InstanceSpace& feature_space) {
    return wasserstein(p, source_features, target_features, feature_space);
}

AdaptationRadius adaptation_radius(double w_hat, std::size_t n, std::size_t m, double p, int d,
                                   double delta, double c_a, double c_b) {
    if (delta <= 0.0 || delta >= 1.0) throw data_error("delta must lie in (0,1)");
    if (c_a <= 0.0 || c_b <= 0.0) throw data_error("concentration constants must be positive");
    if (n < 1 || m < 1) throw data_error("sample counts must be at least 1");
    if (w_hat < 0.0) throw data_error("estimated distance must be nonnegative");
    AdaptationRadius out;
    out.w_hat = w_hat;
    out.dim_flag_ok = static_cast<double>(d) > 2.0 * p;
    // If 4 c_a <= delta the tail bound already holds at radius zero.
    const double log_term = std::max(0.0, std::log(4.0 * c_a / delta));
    const double exponent = p / static_cast<double>(d);
    out.value = w_hat + std::pow(log_term / (c_b * static_cast<double>(n)), exponent) +
                std::pow(log_term / (c_b * static_cast<double>(m)), exponent);
    return out;
}

AdaptationRun run_adaptation(const HypothesisClass& f_class, const DriftData& data,
                             const DriftScenario& scenario, double delta, double c_a, double c_b,
                             const std::vector<Point>& candidates) {
    const InstanceSpace product = scenario.product_space();
    const InstanceSpace features = scenario.feature_space();

    AdaptationRun run;
    run.delta = delta;
    run.c_a = c_a;
    run.c_b = c_b;

    const EmpiricalDistribution source_features = feature_marginal(data.labeled_source);
    run.w_hat = feature_wasserstein(source_features, data.target_features, scenario.p, features).value;

    const AdaptationRadius radius =
        adaptation_radius(run.w_hat, data.labeled_source.size(), data.target_features.size(),
                          scenario.p, scenario.dim, delta, c_a, c_b);
    run.radius = radius.value;
    run.dim_flag_ok = radius.dim_flag_ok;

    const AmbiguityBall ball(scenario.p, run.radius);
    run.result = minimax_erm(f_class, data.labeled_source, ball, candidates, product);

    run.target_risk = data.target_test.expectation(f_class.members[run.result.selected].evaluate);
    run.best_target_risk = std::numeric_limits<double>::infinity();
    for (const Hypothesis& f : f_class.members)
        run.best_target_risk = std::min(run.best_target_risk, data.target_test.expectation(f.evaluate));
    run.excess_target_risk = run.target_risk - run.best_target_risk;

    if (f_class.lipschitz_constant && f_class.entropy_profile && run.radius > 0.0) {
        const double L = *f_class.lipschitz_constant;
        const double comp = f_class.entropy_profile->comp_value;
        const double n = static_cast<double>(data.labeled_source.size());
        run.bound_value = 2.0 * L * run.radius + 48.0 * comp / std::sqrt(n) +
                          48.0 * L * pow_p(product.diameter(), scenario.p) /
                              (std::sqrt(n) * std::pow(run.radius, scenario.p - 1.0)) +
                          3.0 * f_class.upper_bound * std::sqrt(std::log(4.0 / delta)) /
                              std::sqrt(2.0 * n);
    } else {
        run.bound_value = std::numeric_limits<double>::quiet_NaN();
    }
    return run;
}

double verify_pushforward_identity(const DriftScenario& scenario, std::size_t n, double p,
                                   std::uint64_t seed) {
    scenario.validate();
    if (n < 1) throw data_error("sample counts must be at least 1");
    Rng rng(Rng::substream(seed, 7));
    const std::size_t d = static_cast<std::size_t>(scenario.dim);

    std::vector<Point> source_pts, target_pts;
    source_pts.reserve(n);
    target_pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(d);
        for (std::size_t k = 0; k < d; ++k)
            x[k] = rng.next_uniform(scenario.feature_low[k], scenario.feature_high[k]);
        const double y = scenario.label.sample(x, rng);
        target_pts.push_back(Point::labeled(scenario.transform.apply(x), y));
        source_pts.push_back(Point::labeled(std::move(x), y));
    }
    const EmpiricalDistribution p_dist = EmpiricalDistribution::uniform(std::move(source_pts));
    const EmpiricalDistribution q_dist = EmpiricalDistribution::uniform(std::move(target_pts));

    DriftScenario sc = scenario;
    sc.p = p;
    const double joint = wasserstein(p, p_dist, q_dist, sc.product_space()).value;
    const double marginal = wasserstein(p, feature_marginal(p_dist), feature_marginal(q_dist),
                                        sc.feature_space()).value;
    return std::abs(joint - marginal);
}

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw data_error("cannot parse numeric list entry '" + item + "'");
        }
    }
    if (out.empty()) throw data_error("empty numeric list");
    return out;
}

} // namespace

ScenarioConfig parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open scenario file " + path.string());

    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r\n") != std::string::npos)
                throw data_error("scenario line " + std::to_string(lineno) +
                                 ": expected 'key = value'");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\n");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r\n");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw data_error("scenario line " + std::to_string(lineno) + ": empty key or value");
        kv[key] = value;
    }

    const auto take = [&kv](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::string();
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const auto take_double = [&take](const std::string& key, double fallback) {
        const std::string v = take(key);
        if (v.empty()) return fallback;
        try {
            return std::stod(v);
        } catch (const std::exception&) {
            throw data_error("scenario key '" + key + "': cannot parse '" + v + "'");
        }
    };
    const auto take_size = [&take](const std::string& key, std::size_t fallback) {
        const std::string v = take(key);
        if (v.empty()) return fallback;
        try {
            const long long parsed = std::stoll(v);
            if (parsed < 0) throw data_error("scenario key '" + key + "' must be nonnegative");
            return static_cast<std::size_t>(parsed);
        } catch (const data_error&) {
            throw;
        } catch (const std::exception&) {
            throw data_error("scenario key '" + key + "': cannot parse '" + v + "'");
        }
    };

    ScenarioConfig config;
    config.scenario.dim = static_cast<int>(take_size("dim", 1));
    config.scenario.p = take_double("p", 1.0);
    config.n = take_size("n", 40);
    config.m = take_size("m", 40);
    config.test_count = take_size("test_count", 0);
    config.delta = take_double("delta", 0.05);
    config.c_a = take_double("c_a", 1.0);
    config.c_b = take_double("c_b", 1.0);
    config.seed = take_size("seed", 1);

    const std::size_t d = static_cast<std::size_t>(config.scenario.dim);
    const std::string lo = take("feature_low");
    const std::string hi = take("feature_high");
    config.scenario.feature_low = lo.empty() ? std::vector<double>(d, 0.0) : parse_list(lo);
    config.scenario.feature_high = hi.empty() ? std::vector<double>(d, 1.0) : parse_list(hi);
    if (config.scenario.feature_low.size() == 1 && d > 1)
        config.scenario.feature_low.assign(d, config.scenario.feature_low[0]);
    if (config.scenario.feature_high.size() == 1 && d > 1)
        config.scenario.feature_high.assign(d, config.scenario.feature_high[0]);

    const std::string tf = take("transform");
    if (tf.empty() || tf == "identity") {
        config.scenario.transform.kind = Transform::Kind::identity;
    } else if (tf == "shift") {
        config.scenario.transform.kind = Transform::Kind::shift;
    } else if (tf == "affine") {
        config.scenario.transform.kind = Transform::Kind::affine;
    } else if (tf == "cubic") {
        config.scenario.transform.kind = Transform::Kind::cubic;
    } else {
        throw data_error("unknown transform '" + tf + "'");
    }
    const std::string shift = take("shift");
    if (!shift.empty()) config.scenario.transform.shift = parse_list(shift);
    if (config.scenario.transform.shift.size() == 1 && d > 1)
        config.scenario.transform.shift.assign(d, config.scenario.transform.shift[0]);
    const std::string scale = take("scale");
    if (!scale.empty()) config.scenario.transform.scale = parse_list(scale);
    if (config.scenario.transform.scale.size() == 1 && d > 1)
        config.scenario.transform.scale.assign(d, config.scenario.transform.scale[0]);
    if (config.scenario.transform.kind == Transform::Kind::affine &&
        config.scenario.transform.scale.empty())
        config.scenario.transform.scale.assign(d, 1.0);

    const std::string rule = take("label_rule");
    if (rule.empty() || rule == "constant") {
        config.scenario.label.kind = LabelRule::Kind::constant;
    } else if (rule == "linear") {
        config.scenario.label.kind = LabelRule::Kind::linear;
    } else {
        throw data_error("unknown label rule '" + rule + "'");
    }
    config.scenario.label.value = take_double("label_value", 0.0);
    const std::string lw = take("label_weights");
    if (!lw.empty()) config.scenario.label.weights = parse_list(lw);
    if (config.scenario.label.weights.size() == 1 && d > 1)
        config.scenario.label.weights.assign(d, config.scenario.label.weights[0]);
    if (config.scenario.label.kind == LabelRule::Kind::linear &&
        config.scenario.label.weights.empty())
        config.scenario.label.weights.assign(d, 1.0);
    config.scenario.label.bias = take_double("label_bias", 0.0);
    config.scenario.label.noise = take_double("label_noise", 0.0);

    if (!kv.empty()) throw data_error("unknown scenario key '" + kv.begin()->first + "'");

    if (config.test_count == 0) config.test_count = config.m;
    config.scenario.validate();
    return config;
}

} // namespace adaptation
} // namespace wdro
