#include "wittflow/json_io.hpp"

namespace wittflow {

namespace {

Json int_array(const std::vector<i64>& v) {
    Json a = Json::array();
    for (i64 x : v) a.push_back(x);
    return a;
}

std::vector<i64> int_vector(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("expected an integer array");
    std::vector<i64> v;
    for (const auto& x : j) v.push_back(x.get<i64>());
    return v;
}

}  // namespace

Json to_json(const FqFieldPtr& f) {
    Json j;
    j["p"] = f->p();
    j["m"] = f->m();
    j["modulus"] = int_array(f->modulus());
    return j;
}

Json to_json(const FqElem& x) {
    Json j;
    j["coeffs"] = int_array(x.coeffs());
    return j;
}

FqFieldPtr field_from_json(const Json& j) {
    auto f = FqField::create(j.at("p").get<i64>(), j.at("m").get<i64>());
    if (j.contains("modulus") && int_vector(j.at("modulus")) != f->modulus())
        throw InvalidArgument("field modulus does not match the canonical choice");
    return f;
}

FqElem fq_elem_from_json(const Json& j, const FqFieldPtr& f) {
    return f->from_coeffs(int_vector(j.at("coeffs")));
}

Json to_json(const WittRingPtr& r) {
    Json j;
    j["p"] = r->p();
    j["n"] = r->n();
    j["m"] = r->m();
    j["lifted_modulus"] = int_array(r->lifted_modulus());
    return j;
}

Json to_json(const WittElem& x) {
    Json j;
    j["coeffs"] = int_array(x.coeffs());
    return j;
}

WittRingPtr ring_from_json(const Json& j) {
    auto r = WittRing::create(j.at("p").get<i64>(), j.at("n").get<i64>(), j.at("m").get<i64>());
    if (j.contains("lifted_modulus") && int_vector(j.at("lifted_modulus")) != r->lifted_modulus())
        throw InvalidArgument("ring modulus does not match the canonical Hensel lift");
    return r;
}

WittElem witt_elem_from_json(const Json& j, const WittRingPtr& r) {
    return r->from_coeffs(int_vector(j.at("coeffs")));
}

Json to_json(const LaurentElem& x) {
    Json terms = Json::array();
    for (const auto& [e, c] : x.terms()) {
        Json t;
        t["exp"] = e;
        t["coeff"] = to_json(c);
        terms.push_back(t);
    }
    Json j;
    j["terms"] = terms;
    return j;
}

LaurentElem laurent_from_json(const Json& j, const LaurentAlgebraPtr& alg) {
    std::vector<std::pair<i64, WittElem>> terms;
    for (const auto& t : j.at("terms"))
        terms.emplace_back(t.at("exp").get<i64>(), witt_elem_from_json(t.at("coeff"), alg->coeffs()));
    return alg->from_terms(std::move(terms));
}

Json to_json(const FrobeniusLift& F) {
    Json j;
    j["image_of_t"] = to_json(F.image_of_t());
    return j;
}

Json witt_mat_to_json(const WittMat& A) {
    Json rows = Json::array();
    for (i64 i = 0; i < A.rows(); ++i) {
        Json row = Json::array();
        for (i64 jx = 0; jx < A.cols(); ++jx) row.push_back(to_json(A.at(i, jx)));
        rows.push_back(row);
    }
    return rows;
}

WittMat witt_mat_from_json(const Json& j, const WittRingPtr& r) {
    i64 rows = static_cast<i64>(j.size());
    i64 cols = rows ? static_cast<i64>(j.at(0).size()) : 0;
    WittMat A(rows, cols, r->zero());
    for (i64 i = 0; i < rows; ++i)
        for (i64 c = 0; c < cols; ++c) A.at(i, c) = witt_elem_from_json(j.at(i).at(c), r);
    return A;
}

Json laurent_mat_to_json(const LaurentMat& A) {
    Json rows = Json::array();
    for (i64 i = 0; i < A.rows(); ++i) {
        Json row = Json::array();
        for (i64 jx = 0; jx < A.cols(); ++jx) row.push_back(to_json(A.at(i, jx)));
        rows.push_back(row);
    }
    return rows;
}

LaurentMat laurent_mat_from_json(const Json& j, const LaurentAlgebraPtr& alg) {
    i64 rows = static_cast<i64>(j.size());
    i64 cols = rows ? static_cast<i64>(j.at(0).size()) : 0;
    LaurentMat A(rows, cols, alg->zero());
    for (i64 i = 0; i < rows; ++i)
        for (i64 c = 0; c < cols; ++c) A.at(i, c) = laurent_from_json(j.at(i).at(c), alg);
    return A;
}

Json to_json(const EtaleCoverSpec& spec) {
    Json j;
    const auto& layers = spec.layers();
    if (layers.size() == 1) {
        if (layers[0].kind == CoverLayer::Kind::kKummer) {
            j["kind"] = "kummer";
            j["N"] = layers[0].degree;
        } else {
            j["kind"] = "artin_schreier";
            j["g"] = to_json(layers[0].rhs);
        }
    } else {
        j["kind"] = "composite";
        Json ls = Json::array();
        for (const auto& l : layers) {
            Json lj;
            if (l.kind == CoverLayer::Kind::kKummer) {
                lj["kind"] = "kummer";
                lj["N"] = l.degree;
            } else {
                lj["kind"] = "artin_schreier";
                lj["g"] = to_json(l.rhs);
            }
            ls.push_back(lj);
        }
        j["layers"] = ls;
    }
    j["base"] = to_json(spec.base()->coeffs());
    j["connected"] = spec.connected();
    return j;
}

EtaleCoverSpec cover_spec_from_json(const Json& j) {
    auto ring = ring_from_json(j.at("base"));
    if (ring->n() != 1) throw InvalidArgument("cover spec base must be at level 1");
    auto alg = LaurentAlgebra::create(ring);
    auto parse_layer = [&](const Json& lj, std::optional<EtaleCoverSpec> prev) {
        std::string kind = lj.at("kind").get<std::string>();
        if (kind == "kummer") {
            if (prev) throw InvalidArgument("composite covers put the Kummer layer first");
            return EtaleCoverSpec::kummer(alg, lj.at("N").get<i64>());
        }
        if (kind == "artin_schreier") {
            auto g = laurent_from_json(lj.at("g"), alg);
            return prev ? prev->then_artin_schreier(g) : EtaleCoverSpec::artin_schreier(alg, g);
        }
        throw InvalidArgument("unknown cover kind: " + kind);
    };
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "composite") {
        std::optional<EtaleCoverSpec> spec;
        for (const auto& lj : j.at("layers")) spec = parse_layer(lj, spec);
        if (!spec) throw InvalidArgument("composite cover with no layers");
        return *spec;
    }
    return parse_layer(j, std::nullopt);
}

Json to_json(const LiftedCoverPtr& cover) {
    Json j;
    j["spec"] = to_json(cover->spec());
    j["level"] = cover->level();
    j["base_lift"] = to_json(cover->base_lift());
    Json rel = Json::array();
    Json fy = Json::array();
    Json act = Json::array();
    for (i64 l = 0; l < cover->layer_count(); ++l) {
        Json lr;
        lr["degree"] = cover->layers()[l].degree;
        lr["rhs"] = to_json(cover->layers()[l].rhs);
        rel.push_back(lr);
        Json img = Json::array();
        for (const auto& c : cover->frobenius_image(l).coords()) img.push_back(to_json(c));
        fy.push_back(img);
        Json gimg = Json::array();
        for (const auto& c : cover->galois_generator_image(l).coords()) gimg.push_back(to_json(c));
        act.push_back(gimg);
    }
    j["relations"] = rel;
    j["frobenius_images"] = fy;
    j["galois_generator_images"] = act;
    return j;
}

Json to_json(const PeriodicFlow& flow) {
    Json j;
    if (flow.is_point()) {
        j["case"] = "point";
        j["base"] = to_json(flow.point_base().ring);
        j["base_degree"] = flow.point_base().base_degree;
        j["r"] = flow.rank();
        j["f"] = flow.period();
        j["A"] = witt_mat_to_json(flow.A_point());
    } else {
        j["case"] = "curve";
        j["base"] = to_json(flow.curve_base().algebra->coeffs());
        j["base_degree"] = flow.curve_base().base_degree;
        j["lift"] = to_json(flow.curve_base().lift);
        j["r"] = flow.rank();
        j["f"] = flow.period();
        j["A"] = laurent_mat_to_json(flow.A_curve());
    }
    return j;
}

PeriodicFlow flow_from_json(const Json& j) {
    std::string c = j.at("case").get<std::string>();
    auto ring = ring_from_json(j.at("base"));
    std::optional<i64> bd;
    if (j.contains("base_degree")) bd = j.at("base_degree").get<i64>();
    if (c == "point")
        return PeriodicFlow::point(ring, j.at("f").get<i64>(),
                                   witt_mat_from_json(j.at("A"), ring), bd);
    if (c == "curve") {
        auto alg = LaurentAlgebra::create(ring);
        FrobeniusLift F(alg, laurent_from_json(j.at("lift").at("image_of_t"), alg));
        return PeriodicFlow::curve(alg, F, j.at("f").get<i64>(),
                                   laurent_mat_from_json(j.at("A"), alg), bd);
    }
    throw InvalidArgument("flow case must be point or curve");
}

Json to_json(const FlowIsoWitness& w) {
    Json j;
    if (std::holds_alternative<WittMat>(w.U))
        j["U"] = witt_mat_to_json(std::get<WittMat>(w.U));
    else
        j["U"] = laurent_mat_to_json(std::get<LaurentMat>(w.U));
    return j;
}

Json to_json(const ZhatRep& rep) {
    Json j;
    j["shape"] = "zhat";
    j["scalars"] = to_json(rep.scalars);
    j["q"] = pow_i64(rep.scalars->p(), rep.q_degree);
    j["q_degree"] = rep.q_degree;
    j["P"] = witt_mat_to_json(rep.P);
    return j;
}

ZhatRep zhat_from_json(const Json& j) {
    auto scalars = ring_from_json(j.at("scalars"));
    ZhatRep rep{scalars, j.at("q_degree").get<i64>(), witt_mat_from_json(j.at("P"), scalars)};
    return rep;
}

Json to_json(const CoverRep& rep) {
    Json j;
    j["shape"] = "cover";
    j["cover"] = to_json(rep.spec);
    j["scalars"] = to_json(rep.scalars);
    j["q_degree"] = rep.q_degree;
    Json gens = Json::array();
    for (const auto& gmat : rep.geo_gens) gens.push_back(witt_mat_to_json(gmat));
    j["gens"] = gens;
    j["arith"] = witt_mat_to_json(rep.arith);
    return j;
}

CoverRep cover_rep_from_json(const Json& j) {
    CoverRep rep;
    rep.spec = cover_spec_from_json(j.at("cover"));
    rep.scalars = ring_from_json(j.at("scalars"));
    rep.q_degree = j.at("q_degree").get<i64>();
    for (const auto& g : j.at("gens")) rep.geo_gens.push_back(witt_mat_from_json(g, rep.scalars));
    rep.arith = witt_mat_from_json(j.at("arith"), rep.scalars);
    validate_cover_rep(rep);
    return rep;
}

Json to_json(const SolutionModule& module) {
    Json j;
    j["ambient_degree"] = module.ambient_degree;
    Json basis = Json::array();
    for (const auto& v : module.basis) {
        Json vec = Json::array();
        for (const auto& x : v) vec.push_back(to_json(x));
        basis.push_back(vec);
    }
    j["basis"] = basis;
    Json galois;
    galois["frobq"] = witt_mat_to_json(module.frobq);
    j["galois"] = galois;
    j["cardinality_log_p"] = module.log_cardinality;
    return j;
}

Json to_json(const ClassifyResult& res) {
    Json j;
    j["flows"] = res.flow_classes;
    j["reps"] = res.rep_classes;
    j["match"] = res.match;
    return j;
}

Json to_json(const IsoResult& res) {
    Json j;
    switch (res.verdict) {
        case IsoResult::Verdict::kIsomorphic: j["verdict"] = "isomorphic"; break;
        case IsoResult::Verdict::kNotIsomorphic: j["verdict"] = "not_isomorphic"; break;
        case IsoResult::Verdict::kInconclusive: j["verdict"] = "inconclusive"; break;
    }
    if (res.witness) j["witness"] = to_json(*res.witness);
    if (!res.detail.empty()) j["detail"] = res.detail;
    return j;
}

Json to_json(const TorsorReport& rep) {
    Json j;
    j["deformation_classes"] = rep.deformation_classes;
    j["h1_size"] = rep.h1_size;
    j["torsor_ok"] = rep.torsor_ok;
    return j;
}

Json to_json(const AutReport& rep) {
    Json j;
    j["group_size"] = rep.group_size;
    j["h0_dim"] = rep.h0_dim;
    j["identified"] = rep.identified;
    return j;
}

Json to_json(const ObstructionReport& rep, const FiniteGroup* group) {
    Json j;
    j["zero"] = rep.zero;
    if (!rep.lift.empty()) {
        Json lifts = Json::array();
        for (const auto& L : rep.lift) lifts.push_back(witt_mat_to_json(L));
        j["lift"] = lifts;
    }
    if (group && !rep.cocycle.empty()) {
        Json table;
        for (i64 g = 0; g < group->order; ++g)
            for (i64 h = 0; h < group->order; ++h)
                table["g" + std::to_string(g) + ",g" + std::to_string(h)] =
                    witt_mat_to_json(rep.cocycle[g * group->order + h]);
        j["cocycle"] = table;
    }
    return j;
}

Json to_json(const Beta0Class& cls) {
    Json j;
    j["extension_degree"] = cls.extension_degree;
    Json hm = Json::array();
    for (i64 i = 0; i < cls.h.rows(); ++i) {
        Json row = Json::array();
        for (i64 c = 0; c < cls.h.cols(); ++c) row.push_back(to_json(cls.h.at(i, c)));
        hm.push_back(row);
    }
    j["h"] = hm;
    j["class"] = int_array(cls.ad_coords);
    j["zero"] = cls.zero;
    return j;
}

Json to_json(const LesReport& rep) {
    Json j;
    j["dims"] = {{"h0_local_system", rep.dim_h0_L},
                 {"h0_bundle", rep.dim_h0_E},
                 {"im_one_minus_phi", rep.dim_im_one_minus_phi},
                 {"h1_pi1", rep.dim_h1_pi1},
                 {"rank_beta0", rep.rank_beta0}};
    j["exact_at_h0"] = rep.exact_at_h0;
    j["exact_at_h0_second"] = rep.exact_at_h0_second;
    j["exact_at_h1"] = rep.exact_at_h1;
    j["one_minus_phi_surjective_after_base_change"] = rep.surjectivity_witnessed;
    j["surjectivity_max_degree"] = rep.surjectivity_max_degree;
    return j;
}

Json to_json(const RightActionReport& rep) {
    Json j;
    j["identity_pullback"] = rep.identity_pullback;
    j["identity_shift"] = rep.identity_shift;
    if (!rep.detail.empty()) j["detail"] = rep.detail;
    return j;
}

Json to_json(const CorollaryReport& rep) {
    Json j;
    j["iso"] = rep.iso;
    j["N_values"] = int_array(rep.tested_N);
    j["N_stable"] = rep.n_stable;
    return j;
}

}  // namespace wittflow
