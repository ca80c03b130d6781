#include "skewlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace skewlab {

using nlohmann::json;

namespace {

struct ValidationError : Error {
    using Error::Error;
};

double need_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ValidationError("missing numeric field '" + key + "'");
    return j[key].get<double>();
}

std::int64_t need_int(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ValidationError("missing integer field '" + key + "'");
    return j[key].get<std::int64_t>();
}

std::string need_string(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_string())
        throw ValidationError("missing string field '" + key + "'");
    return j[key].get<std::string>();
}

double opt_number(const json& j, const std::string& key, double dflt) {
    return j.contains(key) ? j[key].get<double>() : dflt;
}

std::int64_t opt_int(const json& j, const std::string& key, std::int64_t dflt) {
    return j.contains(key) ? j[key].get<std::int64_t>() : dflt;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json num(double v) {
    if (std::isfinite(v)) return v;
    return fmt(v);  // JSON has no inf literal
}

ShiftOperator parse_shift(const json& j) {
    WeightSequence w = parse_weights(j.at("weights"));
    double p = opt_number(j, "p", 2.0);
    std::string layout = j.contains("layout") ? j["layout"].get<std::string>() : "weighted_shift_plain";
    if (layout == "weighted_shift_plain") return ShiftOperator::weighted_unilateral(std::move(w), p);
    if (layout == "unweighted_on_weighted") return ShiftOperator::unweighted_on_weighted_space(std::move(w), p);
    if (layout == "weighted_bilateral") {
        if (!w.constant_rule()) throw ValidationError("bilateral layout needs a constant weight");
        return ShiftOperator::weighted_bilateral(std::get<WeightSequence::Constant>(w.rule()).w, p);
    }
    throw ValidationError("unknown shift layout '" + layout + "'");
}

Box parse_box(const BaseSystem& sys, const json& j) {
    Box b;
    b.base_center = parse_point(sys, j.at("base_center"));
    b.base_radius = need_number(j, "base_radius");
    b.fiber_center = parse_vector(j.at("fiber_center"));
    b.fiber_radius = need_number(j, "fiber_radius");
    return b;
}

json criterion_rows(const CriterionReport& rep) {
    json rows = json::array();
    for (const auto& s : rep.samples) {
        double threshold = s.condition == 1 ? -rep.gamma : (s.condition == 2 ? rep.gamma : 0.0);
        rows.push_back({{"vector_id", s.vector_id},
                        {"condition", s.condition},
                        {"k", s.k},
                        {"n_k", s.n_k},
                        {"log_value", num(s.log_value)},
                        {"threshold_log", num(threshold)},
                        {"margin", num(threshold - s.log_value)}});
    }
    return rows;
}

json criterion_summary(const CriterionReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"vector_id", r.vector_id},
                        {"condition", r.condition},
                        {"tail_proxy", num(r.tail_proxy)},
                        {"witness_value", num(r.witness_value)},
                        {"witness_n", r.witness_n},
                        {"threshold", num(r.threshold)},
                        {"margin", num(r.margin)},
                        {"pass", r.pass}});
    json s{{"verdict", to_string(rep.verdict)},
           {"gamma", num(rep.gamma)},
           {"conditions", rows},
           {"max_gap", rep.stats.max_gap}};
    if (rep.failed_condition != 0) {
        s["failed_condition"] = rep.failed_condition;
        s["failure_witness"] = rep.failure_witness_id;
    }
    if (rep.stats.syndetic_bound) s["syndetic_bound"] = *rep.stats.syndetic_bound;
    if (rep.stats.is_cofinite_tail) s["cofinite_tail_start"] = rep.stats.cofinite_tail_start;
    return s;
}

}  // namespace

BaseSystem parse_base(const json& j) {
    std::string kind = need_string(j, "kind");
    if (kind == "rotation") return BaseSystem::rotation(opt_number(j, "alpha", golden_alpha()));
    if (kind == "doubling") return BaseSystem::doubling();
    if (kind == "odometer") return BaseSystem::odometer(static_cast<int>(opt_int(j, "depth", 32)));
    if (kind == "torus_skew") return BaseSystem::torus_skew(opt_number(j, "alpha", golden_alpha()));
    throw ValidationError("unknown base kind '" + kind + "'");
}

BasePoint parse_point(const BaseSystem& sys, const json& j) {
    switch (sys.kind()) {
        case BaseKind::rotation:
        case BaseKind::doubling:
            if (!j.is_number()) throw ValidationError("circle point must be a number");
            return CirclePoint{wrap_unit(j.get<double>())};
        case BaseKind::odometer: {
            if (!j.is_array()) throw ValidationError("odometer point must be a digit array");
            OdometerPoint p;
            for (const auto& d : j) p.digits.push_back(d.get<int>() ? 1 : 0);
            p.digits.resize(static_cast<std::size_t>(sys.depth()), 0);
            return p;
        }
        case BaseKind::torus_skew: {
            if (!j.is_array() || j.size() != 2) throw ValidationError("torus point must be [x, y]");
            return TorusPoint{wrap_unit(j[0].get<double>()), wrap_unit(j[1].get<double>())};
        }
    }
    throw ValidationError("bad base point");
}

ScalarCocycle parse_scalar_cocycle(const BaseSystem& base, const json& j) {
    std::string kind = need_string(j, "kind");
    if (kind == "constant")
        return ScalarCocycle(base, ScalarCocycle::Constant{{opt_number(j, "re", 1.0), opt_number(j, "im", 0.0)}});
    if (kind == "cos_profile")
        return ScalarCocycle(base, ScalarCocycle::CosProfile{need_number(j, "p"), need_number(j, "q")});
    throw ValidationError("unknown scalar cocycle kind '" + kind + "'");
}

IntegerCocycle parse_integer_cocycle(const BaseSystem& base, const json& j) {
    std::string kind = need_string(j, "kind");
    if (kind == "constant") return IntegerCocycle(base, IntegerCocycle::Constant{need_int(j, "c")});
    auto values = [&](const char* key) {
        std::vector<std::int64_t> v;
        for (const auto& x : j.at(key)) v.push_back(x.get<std::int64_t>());
        return v;
    };
    if (kind == "coboundary")
        return IntegerCocycle(base, IntegerCocycle::OdometerCoboundary{static_cast<int>(need_int(j, "depth")),
                                                                       values("g")});
    if (kind == "table")
        return IntegerCocycle(base, IntegerCocycle::CylinderTable{static_cast<int>(need_int(j, "depth")),
                                                                  values("values")});
    throw ValidationError("unknown integer cocycle kind '" + kind + "'");
}

WeightSequence parse_weights(const json& j) {
    std::string rule = need_string(j, "rule");
    if (rule == "constant") return WeightSequence::constant(need_number(j, "w"));
    if (rule == "example1") return WeightSequence::example1(need_number(j, "gamma"), need_number(j, "epsilon"));
    if (rule == "example2")
        return WeightSequence::example2(need_number(j, "gamma"),
                                        WindowSpec(opt_int(j, "window_base", 4)));
    if (rule == "table") {
        std::vector<double> v;
        for (const auto& x : j.at("values")) v.push_back(x.get<double>());
        return WeightSequence(WeightSequence::Table{std::move(v)});
    }
    throw ValidationError("unknown weight rule '" + rule + "'");
}

SparseVector parse_vector(const json& j) {
    if (!j.is_array()) throw ValidationError("vector must be an array of [index, re, im] triples");
    std::vector<SparseVector::Entry> es;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() < 2) throw ValidationError("vector entry must be [index, re, im]");
        es.emplace_back(t[0].get<std::int64_t>(),
                        std::complex<double>(t[1].get<double>(), t.size() > 2 ? t[2].get<double>() : 0.0));
    }
    return SparseVector(std::move(es));
}

IndexSequence parse_sequence(const json& j, std::int64_t horizon) {
    std::string rule = need_string(j, "rule");
    if (rule == "full") return IndexSequence::full(horizon);
    if (rule == "arithmetic")
        return IndexSequence::arithmetic(opt_int(j, "start", 1), need_int(j, "step"), horizon);
    if (rule == "example1_rk") return IndexSequence::example1_rk(horizon);
    if (rule == "explicit") {
        std::vector<std::int64_t> terms;
        for (const auto& t : j.at("terms")) terms.push_back(t.get<std::int64_t>());
        return IndexSequence::explicit_terms(std::move(terms), horizon);
    }
    throw ValidationError("unknown sequence rule '" + rule + "'");
}

ExperimentResult run_experiment(const json& config, std::int64_t seed_override,
                                std::int64_t horizon_override) {
    ExperimentResult result;
    json cfg = config;
    try {
        if (seed_override >= 0) cfg["seed"] = seed_override;
        if (horizon_override >= 0) cfg["horizon"] = horizon_override;
        std::string command = need_string(cfg, "command");
        std::int64_t horizon = opt_int(cfg, "horizon", 1000);
        std::uint64_t seed = static_cast<std::uint64_t>(opt_int(cfg, "seed", 0));
        if (horizon < 1) throw ValidationError("horizon must be >= 1");

        json rows = json::array();
        json summary;

        if (command == "gamma") {
            BaseSystem base = parse_base(cfg.at("base"));
            ScalarCocycle c = parse_scalar_cocycle(base, cfg.at("cocycle"));
            const json& mode = cfg.at("mode");
            double g;
            if (need_string(mode, "type") == "quadrature")
                g = estimate_gamma(c, QuadratureMode{need_int(mode, "panels")});
            else if (mode["type"] == "birkhoff") {
                BasePoint a = mode.contains("a") ? parse_point(base, mode["a"]) : base.origin();
                g = estimate_gamma(c, BirkhoffMode{a, opt_int(mode, "horizon", horizon)});
            } else
                throw ValidationError("gamma mode must be quadrature or birkhoff");
            summary = {{"gamma", num(g)}};
            rows.push_back({{"gamma", num(g)}});
        } else if (command == "cocycle") {
            BaseSystem base = parse_base(cfg.at("base"));
            IntegerCocycle c = parse_integer_cocycle(base, cfg.at("cocycle"));
            BasePoint a = cfg.contains("point") ? parse_point(base, cfg["point"]) : base.origin();
            std::int64_t lo = base.invertible() ? -horizon : 0;
            for (std::int64_t n = lo; n <= horizon; ++n)
                rows.push_back({{"n", n}, {"h", c.sum(a, n)}});
            summary = {{"count", rows.size()}};
        } else if (command == "coboundary") {
            BaseSystem base = parse_base(cfg.at("base"));
            IntegerCocycle c = parse_integer_cocycle(base, cfg.at("cocycle"));
            BasePoint a = cfg.contains("point") ? parse_point(base, cfg["point"]) : base.origin();
            BoundednessReport rep = boundedness_report(c, a, horizon, opt_int(cfg, "threshold", 64));
            summary = {{"max_abs", rep.max_abs},
                       {"attained_at", rep.attained_at},
                       {"verdict", rep.verdict == BoundednessVerdict::growth_detected
                                       ? "growth_detected"
                                       : "bounded_within_horizon"}};
            rows.push_back(summary);
        } else if (command == "criterion") {
            ShiftOperator T = parse_shift(cfg);
            IndexSequence seq = parse_sequence(cfg.at("sequence"), horizon);
            double gamma = need_number(cfg, "gamma");
            CriterionOptions opts;
            opts.tol = opt_number(cfg, "tolerance", 1e-6);
            opts.keep_samples = true;
            DenseSetSpec d1, d2;
            d1.seed = seed;
            d2.seed = seed + 1;
            CriterionReport rep = check_criterion(T, seq, d1, d2, gamma, opts);
            rows = criterion_rows(rep);
            summary = criterion_summary(rep);
        } else if (command == "dichotomy") {
            WeightSequence w = parse_weights(cfg.at("weights"));
            double gamma = need_number(cfg, "gamma");
            DichotomyReport rep = shift_dichotomy(w, gamma, horizon, opt_number(cfg, "tolerance", 1e-2));
            const char* cmp = rep.comparison == DichotomyComparison::above
                                  ? "above"
                                  : rep.comparison == DichotomyComparison::below ? "below" : "inconclusive";
            summary = {{"limsup_proxy_log", num(rep.limsup_proxy_log)},
                       {"comparison", cmp},
                       {"implied_verdict", rep.implied_verdict}};
            rows.push_back(summary);
        } else if (command == "hitting") {
            BaseSystem base = parse_base(cfg.at("base"));
            ScalarSkew skew(base, parse_scalar_cocycle(base, cfg.at("cocycle")), parse_shift(cfg));
            Box U = parse_box(base, cfg.at("U"));
            Box V = parse_box(base, cfg.at("V"));
            HittingOptions opts;
            opts.seed = seed;
            opts.record_rows = true;
            opts.ignore_base = cfg.contains("ignore_base") && cfg["ignore_base"].get<bool>();
            HittingSet hs = hitting_set(skew, U, V, horizon, opts);
            for (const auto& r : hs.rows)
                rows.push_back({{"n", r.n},
                                {"hit", r.hit ? 1 : 0},
                                {"base_witness", r.base_witness ? 1 : 0},
                                {"fiber_distance",
                                 num(r.fiber_distance_sq >= 0 ? std::sqrt(r.fiber_distance_sq) : -1.0)},
                                {"log_scale", num(r.log_scale)}});
            ClassifyReport cls = classify(hs);
            summary = {{"hit_count", hs.hits.size()}, {"mode", hs.fiber_test_mode}};
            if (cls.syndetic_bound) summary["syndetic_bound"] = *cls.syndetic_bound;
            if (cls.cofinite_tail_start) summary["cofinite_tail_start"] = *cls.cofinite_tail_start;
            if (!cls.thick_witness_runs.empty())
                summary["longest_run"] = cls.thick_witness_runs.back().second;
        } else if (command == "example1") {
            double gamma = need_number(cfg, "gamma");
            double eps = need_number(cfg, "epsilon");
            if (!(gamma - eps > 0.0))
                throw ValidationError("example1 requires gamma - epsilon > 0");
            Example1Report rep = run_example1(gamma, eps, horizon);
            for (const auto& m : rep.milestones)
                rows.push_back({{"k", m.k},
                                {"r_k", m.r_k},
                                {"s_rk_root_log", num(m.s_rk_root_log)},
                                {"n2", m.n2},
                                {"s_n2_root_log", num(m.s_n2_root_log)}});
            summary = {{"along_rk", criterion_summary(rep.along_rk)},
                       {"along_full", criterion_summary(rep.along_full)}};
        } else if (command == "example2") {
            double gamma = need_number(cfg, "gamma");
            WindowSpec windows(opt_int(cfg, "window_base", 4));
            Example2Report rep =
                run_example2(gamma, windows, horizon, opt_int(cfg, "hitting_horizon", 10000));
            summary = {{"product_identity_violations", rep.product_identity_violations},
                       {"max_product_identity_error", num(rep.max_product_identity_error)},
                       {"nonwindow_hits", rep.nonwindow_hits},
                       {"nonwindow_times_checked", rep.nonwindow_times_checked},
                       {"window_avoiding_verdict", to_string(rep.window_avoiding.verdict)},
                       {"base_side_checkable", rep.base_side_checkable}};
            rows.push_back(summary);
        } else if (command == "furstenberg") {
            FurstenbergReport rep = furstenberg_coverage(opt_number(cfg, "alpha", golden_alpha()),
                                                         opt_int(cfg, "steps", horizon),
                                                         static_cast<int>(opt_int(cfg, "grid", 20)));
            summary = {{"cells_visited", rep.cells_visited},
                       {"cells_total", rep.cells_total},
                       {"steps_to_full", rep.steps_to_full}};
            rows.push_back(summary);
        } else if (command == "intskew") {
            IntSkewReport rep =
                run_intskew(opt_number(cfg, "alpha", golden_alpha()), opt_number(cfg, "weight", 2.0),
                            static_cast<int>(opt_int(cfg, "pairs", 5)), horizon, seed);
            for (const auto& [id, first] : rep.pair_first_hits)
                rows.push_back({{"pair", id}, {"first_hit", first}});
            summary = {{"all_nonempty", rep.all_nonempty}};
        } else {
            throw ValidationError("unknown command '" + command + "'");
        }

        result.report = {{"config", cfg}, {"rows", rows}, {"summary", summary}};
    } catch (const ValidationError& e) {
        result.exit_code = exit_validation_error;
        result.message = e.what();
    } catch (const SingularCocycleError& e) {
        result.exit_code = exit_numerical_error;
        result.message = e.what();
    } catch (const OverflowScaleError& e) {
        result.exit_code = exit_numerical_error;
        result.message = e.what();
    } catch (const json::exception& e) {
        result.exit_code = exit_validation_error;
        result.message = e.what();
    } catch (const Error& e) {
        result.exit_code = exit_validation_error;
        result.message = e.what();
    }
    return result;
}

std::string report_to_json(const json& report) {
    return report.dump(2) + "\n";
}

std::string report_to_csv(const json& report) {
    std::ostringstream out;
    out << "# skewlab report\n";
    out << "# config: " << report.at("config").dump() << "\n";
    const json& rows = report.at("rows");
    if (!rows.empty()) {
        static const char* preferred[] = {
            "vector_id", "condition", "k",           "n_k",      "log_value",      "threshold_log",
            "margin",    "n",         "h",           "hit",      "base_witness",   "fiber_distance",
            "log_scale", "gamma",     "pair",        "first_hit", "r_k",           "s_rk_root_log",
            "n2",        "s_n2_root_log"};
        std::vector<std::string> cols;
        for (const char* key : preferred)
            if (rows[0].contains(key)) cols.push_back(key);
        for (auto it = rows[0].begin(); it != rows[0].end(); ++it)
            if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (i) out << ",";
                const json& v = row.at(cols[i]);
                if (v.is_number_float())
                    out << fmt(v.get<double>());
                else if (v.is_string())
                    out << v.get<std::string>();
                else
                    out << v.dump();
            }
            out << "\n";
        }
    }
    out << "# summary: " << report.at("summary").dump() << "\n";
    return out.str();
}

}  // namespace skewlab
