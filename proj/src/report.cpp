#include "skl/report.hpp"

namespace skl {

namespace {
Json vec_json(const Vec& v) { return Json(v); }
}  // namespace

Json to_json(const NormalCheckReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["worst_margin"] = r.worst_margin;
    j["witness"] = vec_json(r.witness);
    j["radius"] = r.radius;
    j["samples"] = r.samples;
    j["tol"] = r.tol;
    return j;
}

Json to_json(const ConditionAReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["r0"] = r.r0;
    j["boundary_points"] = r.boundary_points;
    j["normals_checked"] = r.normals_checked;
    j["worst_margin"] = r.worst_margin;
    j["failures"] = Json::array();
    for (const auto& f : r.failures) {
        Json jf;
        jf["point"] = vec_json(f.point);
        jf["normal"] = vec_json(f.normal);
        jf["margin"] = f.margin;
        jf["witness"] = vec_json(f.witness);
        j["failures"].push_back(std::move(jf));
    }
    j["interpretation"] = r.interpretation;
    return j;
}

Json to_json(const ConditionBReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["delta"] = r.delta;
    j["beta"] = r.beta;
    j["worst_inner_product"] = r.worst_inner_product;
    j["required"] = 1.0 / r.beta;
    j["empty_neighborhoods"] = r.empty_neighborhoods;
    j["points_checked"] = r.points.size();
    Json worst = Json::array();
    // full per-point dump would dominate the report; keep the 8 tightest
    std::vector<const ConditionBPoint*> sorted;
    for (const auto& p : r.points) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        return a->min_inner_product < b->min_inner_product;
    });
    for (std::size_t i = 0; i < sorted.size() && i < 8; ++i) {
        Json jp;
        jp["point"] = vec_json(sorted[i]->point);
        jp["l_x"] = vec_json(sorted[i]->l_x);
        jp["min_inner_product"] = sorted[i]->min_inner_product;
        jp["neighborhood_normals"] = sorted[i]->neighborhood_normals;
        worst.push_back(std::move(jp));
    }
    j["tightest_points"] = std::move(worst);
    j["interpretation"] = r.interpretation;
    return j;
}

Json to_json(const SolutionCheckReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["phi0_zero"] = r.phi0_zero;
    j["reflection_steps"] = r.reflection_steps;
    j["boundary_violations"] = r.boundary_violations;
    j["worst_boundary_distance"] = r.worst_boundary_distance;
    j["normal_violations"] = r.normal_violations;
    j["worst_normal_margin"] = r.worst_normal_margin;
    j["r0_used"] = r.r0_used;
    j["boundary_tol_scale"] = r.boundary_tol_scale;
    j["normal_tol"] = r.normal_tol;
    return j;
}

Json to_json(const VariationBoundReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["C1"] = r.C1;
    j["C2"] = r.C2;
    j["theta"] = r.theta;
    j["windows_checked"] = r.windows_checked;
    j["failures"] = r.failures;
    j["worst_slack"] = r.worst_slack;
    if (!r.windows.empty()) {
        Json jw = Json::array();
        for (const auto& w : r.windows) {
            Json x;
            x["i0"] = w.i0;
            x["i1"] = w.i1;
            x["s"] = w.s;
            x["t"] = w.t;
            x["lhs"] = w.lhs;
            x["rhs"] = w.rhs;
            x["pass"] = w.pass;
            jw.push_back(std::move(x));
        }
        j["windows"] = std::move(jw);
    }
    return j;
}

Json to_json(const OsgoodDiagnosis& r) {
    Json j;
    j["divergence_consistent"] = r.divergence_consistent;
    j["eps"] = r.eps;
    j["ladder"] = r.ladder;
    j["partial_integrals"] = r.partial_integrals;
    j["last_increment"] = r.last_increment;
    j["threshold"] = r.threshold;
    j["ladder_truncated"] = r.ladder_truncated;
    j["interpretation"] = r.interpretation;
    return j;
}

namespace {
Json violations_json(const std::vector<CheckViolation>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) {
        Json jv;
        jv["t"] = v.t;
        jv["x"] = vec_json(v.x);
        if (!v.y.empty()) jv["y"] = vec_json(v.y);
        jv["lhs"] = v.lhs;
        jv["rhs"] = v.rhs;
        arr.push_back(std::move(jv));
    }
    return arr;
}
}  // namespace

Json to_json(const RegularityReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["samples"] = r.samples;
    j["violations"] = r.violations;
    j["worst_ratio"] = r.worst_ratio;
    j["R"] = r.R;
    j["T"] = r.T;
    j["witnesses"] = violations_json(r.witnesses);
    j["note"] = "g is deterministic in this artifact; the progressively measurable case is out of scope";
    j["interpretation"] = r.interpretation;
    return j;
}

Json to_json(const GrowthReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["samples"] = r.samples;
    j["violations"] = r.violations;
    j["worst_ratio"] = r.worst_ratio;
    j["radius"] = r.radius;
    j["T"] = r.T;
    j["witnesses"] = violations_json(r.witnesses);
    j["note"] = "g is deterministic in this artifact; the progressively measurable case is out of scope";
    j["interpretation"] = r.interpretation;
    return j;
}

Json to_json(const V1Report& r) {
    Json j;
    j["pass"] = r.pass;
    j["strictly_increasing"] = r.strictly_increasing;
    j["top_exceeds_threshold"] = r.top_exceeds_threshold;
    j["escape_threshold"] = r.escape_threshold;
    Json rungs = Json::array();
    for (const auto& rng : r.rungs) {
        Json x;
        x["R"] = rng.R;
        x["infimum"] = rng.infimum;
        x["argmin"] = vec_json(rng.argmin);
        x["samples"] = rng.samples;
        rungs.push_back(std::move(x));
    }
    j["rungs"] = std::move(rungs);
    j["interpretation"] = r.interpretation;
    return j;
}

Json to_json(const V2Report& r) {
    Json j;
    j["pass"] = r.pass;
    j["max_inner_product"] = r.max_inner_product;
    j["witness_point"] = vec_json(r.witness_point);
    j["witness_normal"] = vec_json(r.witness_normal);
    j["normals_checked"] = r.normals_checked;
    j["tol"] = r.tol;
    return j;
}

Json to_json(const V3Report& r) {
    Json j;
    j["pass"] = r.pass;
    j["samples"] = r.samples;
    j["violations"] = r.violations;
    j["worst_residual"] = r.worst_residual;
    j["worst_ratio"] = r.worst_ratio;
    j["g_used"] = r.g_used;
    j["witness"] = vec_json(r.witness);
    j["witness_t"] = r.witness_t;
    j["note"] = "g is deterministic in this artifact; the progressively measurable case is out of scope";
    j["interpretation"] = r.interpretation;
    return j;
}

Json to_json(const CoveringReport& r) {
    Json j;
    j["pass"] = r.pass;
    Json centers = Json::array();
    for (const auto& c : r.centers) {
        Json x;
        x["n"] = c.n;
        x["M_estimate"] = c.M_estimate;
        x["bound"] = c.bound;
        x["pass"] = c.pass;
        x["witness"] = vec_json(c.witness);
        x["samples"] = c.samples;
        centers.push_back(std::move(x));
    }
    j["centers"] = std::move(centers);
    j["coverage_checked"] = r.coverage_checked;
    Json unc = Json::array();
    for (const auto& p : r.uncovered) unc.push_back(vec_json(p));
    j["uncovered"] = std::move(unc);
    j["interpretation"] = r.interpretation;
    return j;
}

Json to_json(const ExcursionReport& r) {
    Json j;
    j["sigma_count"] = r.sigma_count;
    j["end_index"] = r.end_index;
    Json ev = Json::array();
    for (const auto& e : r.events) {
        Json x;
        x["k"] = e.k;
        x["tau_index"] = e.tau_index;
        x["n_k"] = e.n_k;  // -1 encodes infinity
        ev.push_back(std::move(x));
    }
    j["events"] = std::move(ev);
    return j;
}

Json to_json(const UniquenessReport& r) {
    Json j;
    j["seeds"] = r.seeds;
    j["regularity_warning"] = r.regularity_warning;
    j["regularity_violations"] = r.regularity_violations;
    Json cells = Json::array();
    for (const auto& c : r.cells) {
        Json x;
        x["dt"] = c.dt;
        x["delta0"] = c.delta0;
        x["median_sup"] = c.median_sup;
        x["p90_sup"] = c.p90_sup;
        cells.push_back(std::move(x));
    }
    j["cells"] = std::move(cells);
    Json refine = Json::array();
    for (const auto& c : r.refinement) {
        Json x;
        x["dt"] = c.dt;
        x["median_sup"] = c.median_sup;
        refine.push_back(std::move(x));
    }
    j["refinement"] = std::move(refine);
    j["refinement_ratios"] = r.refinement_ratios;
    j["note"] = "observed decay only; the theory does not quantify a uniqueness modulus";
    return j;
}

Json to_json(const ExplosionReport& r) {
    Json j;
    j["paths"] = r.paths;
    j["T"] = r.T;
    j["dt"] = r.dt;
    Json rungs = Json::array();
    for (const auto& rg : r.rungs) {
        Json x;
        x["R"] = rg.R;
        x["hits"] = rg.hits;
        x["fraction"] = rg.fraction;
        x["wilson95"] = Json::array({rg.wilson_lo, rg.wilson_hi});
        if (!rg.hit_times.empty() && rg.hit_times.size() <= 64) x["hit_times"] = rg.hit_times;
        rungs.push_back(std::move(x));
    }
    j["rungs"] = std::move(rungs);
    j["max_abs_median"] = [&] {
        std::vector<double> v = r.per_path_max_abs;
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    }();
    j["interpretation"] = r.interpretation;
    return j;
}

}  // namespace skl
