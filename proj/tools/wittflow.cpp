// Deterministic command-line surface over the library: JSON in, JSON out.
// Exit codes: 0 success, 2 schema error, 3 budget exhausted, 4 inconclusive.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wittflow/json_io.hpp"

using namespace wittflow;

namespace {

struct GlobalOpts {
    std::string in_path, out_path;
    i64 seed = 0;
    i64 budget_extension = 512;
    i64 budget_group = 200000;
    i64 budget_search = 1 << 20;
};

Json read_request(const GlobalOpts& g) {
    std::string text;
    if (!g.in_path.empty()) {
        std::ifstream in(g.in_path);
        if (!in) throw InvalidArgument("cannot open input file " + g.in_path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    }
    if (text.empty()) return Json::object();
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidArgument(std::string("invalid JSON request: ") + e.what());
    }
}

void write_response(const GlobalOpts& g, Json result) {
    Json out;
    out["seed"] = g.seed;
    out["result"] = std::move(result);
    std::string text = out.dump(2) + "\n";
    if (!g.out_path.empty()) {
        std::ofstream os(g.out_path);
        os << text;
    } else {
        std::cout << text;
    }
}

LaurentAlgebraPtr algebra_of(const WittRingPtr& r) { return LaurentAlgebra::create(r); }

KatzOptions katz_opts(const GlobalOpts& g) {
    KatzOptions o;
    o.explicit_ambient_cap = std::min<i64>(g.budget_extension, 48);
    return o;
}

Json run_field(const Json& req) {
    std::string op = req.value("op", "create");
    auto f = field_from_json(req.at("field"));
    if (op == "create") return to_json(f);
    if (op == "frobenius") return to_json(frobenius(fq_elem_from_json(req.at("x"), f)));
    if (op == "embed") {
        auto dst = field_from_json(req.at("dst"));
        auto emb = FieldEmbedding::canonical(f, dst);
        Json j;
        j["generator_image"] = to_json(emb.generator_image());
        if (req.contains("x")) j["image"] = to_json(emb.apply(fq_elem_from_json(req.at("x"), f)));
        return j;
    }
    throw InvalidArgument("field: unknown op " + op);
}

Json run_witt(const Json& req) {
    std::string op = req.value("op", "create");
    auto r = ring_from_json(req.at("ring"));
    if (op == "create") return to_json(r);
    if (op == "teichmuller")
        return to_json(teichmuller(fq_elem_from_json(req.at("a"), r->base()), r));
    if (op == "sigma") return to_json(sigma(witt_elem_from_json(req.at("x"), r)));
    if (op == "coords") {
        auto [a0, a1] = to_witt_coords(witt_elem_from_json(req.at("x"), r));
        Json j;
        j["a0"] = to_json(a0);
        j["a1"] = to_json(a1);
        return j;
    }
    if (op == "from_coords") {
        auto x = from_witt_coords(fq_elem_from_json(req.at("a0"), r->base()),
                                  fq_elem_from_json(req.at("a1"), r->base()), r);
        return to_json(x);
    }
    throw InvalidArgument("witt: unknown op " + op);
}

Json run_cover(const Json& req) {
    auto spec = cover_spec_from_json(req.at("spec"));
    i64 level = req.value("level", 1);
    auto ring = WittRing::create(spec.base()->p(), level, spec.base()->coeffs()->m());
    auto alg = algebra_of(ring);
    FrobeniusLift F = req.contains("lift")
                          ? FrobeniusLift(alg, laurent_from_json(req.at("lift").at("image_of_t"), alg))
                          : FrobeniusLift::standard(alg);
    auto cover = LiftedCover::lift(spec, level, F);
    return to_json(cover);
}

Json run_flow(const std::string& action, const Json& req, const GlobalOpts& g) {
    auto flow = flow_from_json(req.at("flow"));
    if (action == "shift") {
        i64 k = req.value("times", 1);
        return to_json(shift_pow(flow, k));
    }
    if (action == "pullback") return to_json(galois_pullback(flow, req.at("sigma_power").get<i64>()));
    if (action == "iso") {
        auto other = flow_from_json(req.at("other"));
        IsoOptions opts;
        opts.combo_budget = g.budget_search;
        return to_json(iso_flows(flow, other, opts));
    }
    if (action == "diagram") {
        auto chain = expand_diagram(flow);
        Json j;
        j["period"] = chain.period;
        Json terms = Json::array();
        for (const auto& M : chain.de_rham_terms) {
            Json t;
            t["rank"] = M.rank;
            t["theta"] = laurent_mat_to_json(M.theta);
            terms.push_back(t);
        }
        j["de_rham_terms"] = terms;
        j["flow"] = to_json(chain.flow);
        return j;
    }
    throw InvalidArgument("flow: unknown action " + action);
}

Json run_solve(const Json& req, const GlobalOpts& g) {
    auto ring = ring_from_json(req.at("ring"));
    auto B = witt_mat_from_json(req.at("B"), ring);
    i64 f = req.at("f").get<i64>();
    SolverPolicy pol;
    pol.max_ambient_degree = g.budget_extension;
    return to_json(solve_frobenius_fixed(B, f, pol));
}

Json run_correspond(const std::string& action, const Json& req, const GlobalOpts& g,
                    i64 q, i64 f, i64 n, i64 r) {
    if (action == "classify") {
        i64 p = 2, m = 0, qq = q;
        for (i64 cand = 2; cand <= qq; ++cand) {
            if (qq % cand == 0) {
                p = cand;
                m = 0;
                while (qq % cand == 0) { qq /= cand; ++m; }
                break;
            }
        }
        if (qq != 1 && m == 0) throw InvalidArgument("classify: q must be a prime power");
        ClassifyOptions opts;
        opts.group_budget = g.budget_group;
        return to_json(classify_point_case(p, m, n, r, f, opts));
    }
    auto opts = katz_opts(g);
    if (action == "to-rep") {
        auto flow = flow_from_json(req.at("flow"));
        if (flow.is_point()) {
            auto full = flow_to_rep_point_full(flow, opts);
            Json j = to_json(full.rep);
            if (full.module) j["module"] = to_json(*full.module);
            return j;
        }
        std::optional<EtaleCoverSpec> hint;
        if (req.contains("cover_hint")) hint = cover_spec_from_json(req.at("cover_hint"));
        auto res = flow_to_rep_curve(flow, hint, opts);
        return to_json(res.rep);
    }
    if (action == "to-flow") {
        const auto& rj = req.at("rep");
        if (rj.at("shape") == "zhat") return to_json(rep_to_flow(zhat_from_json(rj), opts));
        auto rep = cover_rep_from_json(rj);
        auto ring = WittRing::create(rep.spec.base()->p(), req.value("level", 1),
                                     rep.spec.base()->coeffs()->m());
        auto alg = algebra_of(ring);
        FrobeniusLift F = req.contains("lift")
                              ? FrobeniusLift(alg, laurent_from_json(req.at("lift").at("image_of_t"), alg))
                              : FrobeniusLift::standard(alg);
        return to_json(rep_to_flow_cover(rep, F, opts));
    }
    if (action == "roundtrip") {
        auto flow = flow_from_json(req.at("flow"));
        Json j;
        if (flow.is_point()) {
            auto rep = flow_to_rep_point(flow, opts);
            auto back = rep_to_flow(rep, opts);
            auto iso = iso_flows(flow, back);
            j["rep"] = to_json(rep);
            j["flow_back"] = to_json(back);
            j["iso"] = to_json(iso);
        } else {
            auto res = flow_to_rep_curve(flow, std::nullopt, opts);
            auto back = rep_to_flow_cover(res.rep, flow.curve_base().lift, opts);
            auto iso = iso_flows(flow, back);
            j["rep"] = to_json(res.rep);
            j["flow_back"] = to_json(back);
            j["iso"] = to_json(iso);
        }
        return j;
    }
    throw InvalidArgument("correspond: unknown action " + action);
}

Json run_deform(const std::string& action, const Json& req) {
    if (action == "obstruct") {
        auto rep = zhat_from_json(req.at("rep"));
        return to_json(obstruction_zhat(rep), nullptr);
    }
    if (action == "torsor") {
        const auto& rj = req.at("rep");
        if (rj.contains("group")) {
            std::vector<i64> shape;
            for (const auto& d : rj.at("group")) shape.push_back(d.get<i64>());
            auto G = FiniteGroup::abelian(shape);
            auto ring = ring_from_json(rj.at("scalars"));
            std::vector<WittMat> gens;
            for (const auto& gj : rj.at("gens")) gens.push_back(witt_mat_from_json(gj, ring));
            auto rep = make_group_rep(G, ring, gens);
            return to_json(deformation_torsor_group(rep));
        }
        return to_json(deformation_torsor_zhat(zhat_from_json(rj)));
    }
    if (action == "aut") return to_json(automorphism_group_zhat(zhat_from_json(req.at("rep"))));
    if (action == "beta0") {
        auto flow = flow_from_json(req.at("flow"));
        auto end = point_end_of_flow(flow);
        auto fld = end.R1->base();
        i64 r = flow.rank();
        Mat<FqElem> gmat(r, r, fld->zero());
        const auto& gj = req.at("g");
        for (i64 i = 0; i < r; ++i)
            for (i64 c = 0; c < r; ++c) gmat.at(i, c) = fq_elem_from_json(gj.at(i).at(c), fld);
        return to_json(beta0_point(end, gmat));
    }
    if (action == "les") {
        auto flow = flow_from_json(req.at("flow"));
        return to_json(les_check_point(flow));
    }
    throw InvalidArgument("deform: unknown action " + action);
}

Json run_galois(const std::string& action, const Json& req) {
    auto flow = flow_from_json(req.at("flow"));
    if (action == "prop") {
        auto rep = flow.is_point() ? verify_right_action_point(flow) : verify_right_action_curve(flow);
        return to_json(rep);
    }
    if (action == "corollary") {
        std::vector<i64> Ns;
        if (req.contains("N_values"))
            for (const auto& nv : req.at("N_values")) Ns.push_back(nv.get<i64>());
        auto rep = flow.is_point() ? verify_main_corollary_point(flow, Ns)
                                   : verify_main_corollary_curve(flow, Ns);
        return to_json(rep);
    }
    throw InvalidArgument("galois: unknown action " + action);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computer algebra for Frobenius-periodic modules over truncated Witt rings"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--in", g.in_path, "read the JSON request from a file instead of stdin");
    app.add_option("--out", g.out_path, "write the JSON response to a file instead of stdout");
    app.add_option("--seed", g.seed, "seed echoed in the response; sampling is deterministic in it");
    app.add_option("--budget-extension-degree", g.budget_extension, "ambient extension degree cap");
    app.add_option("--budget-group-order", g.budget_group, "classification enumeration cap");
    app.add_option("--budget-matrix-search", g.budget_search, "isomorphism search cap");

    app.fallthrough();
    auto* field_cmd = app.add_subcommand("field", "finite field operations");
    auto* witt_cmd = app.add_subcommand("witt", "truncated Witt ring operations");
    auto* cover_cmd = app.add_subcommand("cover", "lift an etale cover with its Frobenius");
    auto* flow_cmd = app.add_subcommand("flow", "periodic flow operations");
    std::string flow_action;
    flow_cmd->add_option("action", flow_action, "shift|pullback|iso|diagram")->required();
    auto* solve_cmd = app.add_subcommand("solve", "Frobenius fixed-point solver");
    auto* corr_cmd = app.add_subcommand("correspond", "flows <-> representations");
    std::string corr_action;
    i64 qq = 0, ff = 1, nn = 1, rr = 1;
    corr_cmd->add_option("action", corr_action, "to-rep|to-flow|roundtrip|classify")->required();
    corr_cmd->add_option("--q", qq, "point count of the base field (classify)");
    corr_cmd->add_option("--f", ff, "period (classify)");
    corr_cmd->add_option("--n", nn, "truncation level (classify)");
    corr_cmd->add_option("--r", rr, "rank (classify)");
    auto* deform_cmd = app.add_subcommand("deform", "deformation calculus");
    std::string deform_action;
    deform_cmd->add_option("action", deform_action, "obstruct|torsor|aut|beta0|les")->required();
    auto* galois_cmd = app.add_subcommand("galois", "Galois twist verifiers");
    std::string galois_action;
    galois_cmd->add_option("action", galois_action, "prop|corollary")->required();

    for (auto* sub : app.get_subcommands({})) (void)sub;
    for (auto* sub : {field_cmd, witt_cmd, cover_cmd, flow_cmd, solve_cmd, corr_cmd, deform_cmd,
                      galois_cmd})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        Json result;
        if (field_cmd->parsed()) {
            result = run_field(read_request(g));
        } else if (witt_cmd->parsed()) {
            result = run_witt(read_request(g));
        } else if (cover_cmd->parsed()) {
            result = run_cover(read_request(g));
        } else if (flow_cmd->parsed()) {
            result = run_flow(flow_action, read_request(g), g);
        } else if (solve_cmd->parsed()) {
            result = run_solve(read_request(g), g);
        } else if (corr_cmd->parsed()) {
            Json req = corr_action == "classify" ? Json::object() : read_request(g);
            result = run_correspond(corr_action, req, g, qq, ff, nn, rr);
        } else if (deform_cmd->parsed()) {
            result = run_deform(deform_action, read_request(g));
        } else if (galois_cmd->parsed()) {
            result = run_galois(galois_action, read_request(g));
        }
        // inconclusive verdicts exit with their own code
        if (result.contains("verdict") && result["verdict"] == "inconclusive") {
            write_response(g, result);
            return 4;
        }
        if (result.contains("iso") && result["iso"].is_object() &&
            result["iso"].value("verdict", "") == "inconclusive") {
            write_response(g, result);
            return 4;
        }
        write_response(g, result);
        return 0;
    } catch (const BudgetError& e) {
        Json err;
        err["error"] = "budget";
        err["reason"] = e.what();
        write_response(g, err);
        return 3;
    } catch (const InconclusiveError& e) {
        Json err;
        err["error"] = "inconclusive";
        err["reason"] = e.what();
        write_response(g, err);
        return 4;
    } catch (const std::exception& e) {
        Json err;
        err["error"] = "schema";
        err["reason"] = e.what();
        write_response(g, err);
        return 2;
    }
}
