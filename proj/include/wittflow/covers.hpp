#pragma once

// Finite Galois etale covers of the punctured line in characteristic p:
// Kummer layers u^N = t (gcd(N, p) = 1, mu_N inside F_q) and Artin-Schreier
// layers u^p - u = g(t), plus ordered composites (Kummer first). Covers are
// Hensel-lifted mod p^n with the layer relations kept in the same shape
// (Kummer relations lift to themselves; Artin-Schreier right-hand sides lift
// coefficient-wise), and carry the unique Frobenius lift compatible with the
// base lift together with the lifted Galois action.

#include <memory>
#include <optional>
#include <vector>

#include "wittflow/laurent.hpp"

namespace wittflow {

struct CoverLayer {
    enum class Kind { kKummer, kArtinSchreier };
    Kind kind;
    i64 degree;       // N for Kummer, p for Artin-Schreier
    LaurentElem rhs;  // t for Kummer (fixed), g for Artin-Schreier; level-1 data
};

// Level-1 description of the cover, with its Galois group data.
class EtaleCoverSpec {
public:
    // u^N = t over F_q[t, t^{-1}]; requires N >= 1, gcd(N, p) = 1, N | q - 1.
    static EtaleCoverSpec kummer(LaurentAlgebraPtr base1, i64 N);
    // u^p - u = g(t).
    static EtaleCoverSpec artin_schreier(LaurentAlgebraPtr base1, LaurentElem g);
    // ordered chain: at most one Kummer layer first, then Artin-Schreier layers.
    EtaleCoverSpec then_artin_schreier(LaurentElem g) const;

    const LaurentAlgebraPtr& base() const { return base1_; }
    const std::vector<CoverLayer>& layers() const { return layers_; }
    i64 degree() const;
    bool connected() const { return connected_; }
    // orders of the per-layer cyclic factors of the Galois group
    std::vector<i64> group_shape() const;
    // primitive N-th root of unity used for the Kummer action (first in
    // enumeration order), when a Kummer layer is present
    const FqElem& kummer_root() const { return zeta_; }

    // empty placeholder; every real spec comes from the factories
    EtaleCoverSpec() = default;

private:
    friend class LiftedCover;
    friend EtaleCoverSpec extend_spec_constants(const EtaleCoverSpec&, const LaurentAlgebraPtr&);
    LaurentAlgebraPtr base1_;
    std::vector<CoverLayer> layers_;
    bool connected_ = true;
    FqElem zeta_;
    void recheck();
};

class LiftedCover;
using LiftedCoverPtr = std::shared_ptr<const LiftedCover>;

class CoverElem {
public:
    CoverElem() = default;
    CoverElem(LiftedCoverPtr cover, std::vector<LaurentElem> coords);

    const LiftedCoverPtr& cover() const { return cover_; }
    // coefficients on the monomial basis u_0^{i_0} ... u_{L-1}^{i_{L-1}},
    // mixed-radix index with layer 0 fastest
    const std::vector<LaurentElem>& coords() const { return coords_; }

    bool is_zero() const;
    bool is_one() const;
    CoverElem operator+(const CoverElem& o) const;
    CoverElem operator-(const CoverElem& o) const;
    CoverElem operator-() const;
    CoverElem operator*(const CoverElem& o) const;
    bool operator==(const CoverElem& o) const;
    bool operator!=(const CoverElem& o) const { return !(*this == o); }
    CoverElem pow(i64 e) const;  // e >= 0

    CoverElem scaled(const LaurentElem& c) const;
    CoverElem zero_like() const;
    CoverElem one_like() const;
    i64 val() const;  // p-adic valuation of all coordinates
    CoverElem div_p(i64 k) const;

private:
    LiftedCoverPtr cover_;
    std::vector<LaurentElem> coords_;
};

// Group element: per-layer index (exponent of zeta for Kummer, shift c in
// F_p for Artin-Schreier).
struct CoverGroupElem {
    std::vector<i64> idx;
};

// The cover at level n: relations, Galois action, Frobenius lift.
class LiftedCover : public std::enable_shared_from_this<LiftedCover> {
public:
    // Hensel-lift the described cover to level n over the base carrying lift F.
    static LiftedCoverPtr lift(const EtaleCoverSpec& spec, i64 level, const FrobeniusLift& F);

    const EtaleCoverSpec& spec() const { return spec_; }
    i64 level() const { return level_; }
    const LaurentAlgebraPtr& base() const { return base_; }
    const FrobeniusLift& base_lift() const { return *F_; }
    i64 degree() const { return degree_; }
    i64 layer_count() const { return static_cast<i64>(layers_.size()); }
    const std::vector<CoverLayer>& layers() const { return layers_; }  // level-n rhs data

    CoverElem zero() const;
    CoverElem one() const;
    CoverElem from_base(const LaurentElem& x) const;
    CoverElem generator(i64 layer) const;  // u_layer
    // image of u_layer under the lifted Frobenius
    const CoverElem& frobenius_image(i64 layer) const { return frob_images_[layer]; }
    // image of u_layer under the a-th power of the layer's Galois generator
    const CoverElem& galois_generator_image(i64 layer, i64 a = 1) const {
        return galois_powers_[layer][mod_pos(a, static_cast<i64>(galois_powers_[layer].size()))];
    }

    // the unique Frobenius lift compatible with the base lift
    CoverElem frobenius(const CoverElem& x) const;
    CoverElem frobenius_pow(const CoverElem& x, i64 s) const;
    // lifted Galois action
    CoverElem galois_act(const CoverGroupElem& g, const CoverElem& x) const;
    // arithmetic Frobenius on constants only (sigma^k on Witt coefficients,
    // fixing t and the cover variables)
    CoverElem constant_sigma(const CoverElem& x, i64 k) const;

    std::vector<CoverGroupElem> group_elements() const;  // all of them
    CoverGroupElem group_identity() const;

    bool same_cover(const LiftedCover& o) const { return this == &o; }

private:
    LiftedCover() = default;
    EtaleCoverSpec spec_;
    i64 level_ = 1;
    LaurentAlgebraPtr base_;
    std::optional<FrobeniusLift> F_;
    i64 degree_ = 1;
    std::vector<CoverLayer> layers_;  // rhs lifted to level n
    std::vector<CoverElem> frob_images_;
    std::vector<std::vector<CoverElem>> galois_powers_;
    std::vector<i64> strides_;

    friend class CoverElem;
    CoverElem reduce_monomial(const std::vector<i64>& exps, const LaurentElem& coeff) const;
};

// reduction of a cover element to a lower-level lifted cover (tower maps)
CoverElem reduce_cover_elem(const CoverElem& x, const LiftedCoverPtr& target);

// d/dt on the cover ring, by implicit differentiation of the layer
// relations: N u^{N-1} u' = 1 for Kummer, (p u^{p-1} - 1) u' = g'(t) for
// Artin-Schreier
CoverElem cover_derivative(const CoverElem& x);

}  // namespace wittflow
