#include "wittflow/laurent.hpp"

#include <algorithm>
#include <map>

namespace wittflow {

LaurentElem::LaurentElem(LaurentAlgebraPtr alg, std::vector<std::pair<i64, WittElem>> terms)
    : alg_(std::move(alg)), terms_(std::move(terms)) {
    normalize();
}

void LaurentElem::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<i64, WittElem>> out;
    for (auto& [e, c] : terms_) {
        if (!out.empty() && out.back().first == e)
            out.back().second = out.back().second + c;
        else
            out.emplace_back(e, c);
    }
    terms_.clear();
    for (auto& [e, c] : out)
        if (!c.is_zero()) terms_.emplace_back(e, c);
}

bool LaurentElem::is_one() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second.is_one();
}

bool LaurentElem::is_unit() const {
    if (terms_.empty()) return false;
    i64 units_seen = 0;
    for (const auto& [e, c] : terms_) {
        (void)e;
        if (c.is_unit()) ++units_seen;
    }
    return units_seen == 1;
}

i64 LaurentElem::min_exp() const {
    if (terms_.empty()) throw InvalidArgument("min_exp of zero");
    return terms_.front().first;
}

i64 LaurentElem::max_exp() const {
    if (terms_.empty()) throw InvalidArgument("max_exp of zero");
    return terms_.back().first;
}

i64 LaurentElem::val() const {
    i64 v = alg_->n();
    for (const auto& [e, c] : terms_) {
        (void)e;
        v = std::min(v, c.val());
    }
    return v;
}

LaurentElem LaurentElem::operator+(const LaurentElem& o) const {
    auto t = terms_;
    t.insert(t.end(), o.terms_.begin(), o.terms_.end());
    return LaurentElem(alg_, std::move(t));
}

LaurentElem LaurentElem::operator-(const LaurentElem& o) const { return *this + (-o); }

LaurentElem LaurentElem::operator-() const {
    auto t = terms_;
    for (auto& [e, c] : t) {
        (void)e;
        c = -c;
    }
    return LaurentElem(alg_, std::move(t));
}

LaurentElem LaurentElem::operator*(const LaurentElem& o) const {
    std::map<i64, WittElem> acc;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            auto it = acc.find(e1 + e2);
            if (it == acc.end())
                acc.emplace(e1 + e2, c1 * c2);
            else
                it->second = it->second + c1 * c2;
        }
    std::vector<std::pair<i64, WittElem>> t(acc.begin(), acc.end());
    return LaurentElem(alg_, std::move(t));
}

bool LaurentElem::operator==(const LaurentElem& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].first != o.terms_[i].first || !(terms_[i].second == o.terms_[i].second))
            return false;
    return true;
}

LaurentElem LaurentElem::inverse() const {
    if (!is_unit()) throw InvalidArgument("LaurentElem: inverse of non-unit");
    // x = c t^k (1 + eps) with eps nilpotent: locate the unit monomial
    i64 k = 0;
    WittElem c = alg_->coeffs()->zero();
    for (const auto& [e, coeff] : terms_)
        if (coeff.is_unit()) { k = e; c = coeff; }
    LaurentElem lead = alg_->term(c, k);
    LaurentElem eps_num = *this - lead;  // divisible by p
    LaurentElem lead_inv = alg_->term(c.inverse(), -k);
    LaurentElem eps = eps_num * lead_inv;  // nilpotent
    // (1 + eps)^{-1} = 1 - eps + eps^2 - ... ; terminates since eps^n = 0
    LaurentElem acc = alg_->one();
    LaurentElem power = alg_->one();
    for (i64 i = 1; i < alg_->n(); ++i) {
        power = power * eps;
        if (power.is_zero()) break;
        acc = (i % 2 == 1) ? acc - power : acc + power;
    }
    LaurentElem result = lead_inv * acc;
    if (!(result * *this).is_one()) throw InternalError("LaurentElem: inverse failed");
    return result;
}

LaurentElem LaurentElem::pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    LaurentElem r = alg_->one();
    LaurentElem b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

LaurentElem LaurentElem::derivative() const {
    auto t = terms_;
    std::vector<std::pair<i64, WittElem>> out;
    for (auto& [e, c] : t) {
        if (e == 0) continue;
        out.emplace_back(e - 1, c.times_int(e));
    }
    return LaurentElem(alg_, std::move(out));
}

LaurentElem LaurentElem::scaled(const WittElem& c) const {
    auto t = terms_;
    for (auto& [e, coeff] : t) {
        (void)e;
        coeff = coeff * c;
    }
    return LaurentElem(alg_, std::move(t));
}

LaurentElem LaurentElem::times_int(i64 c) const {
    auto t = terms_;
    for (auto& [e, coeff] : t) {
        (void)e;
        coeff = coeff.times_int(c);
    }
    return LaurentElem(alg_, std::move(t));
}

LaurentElem LaurentElem::div_p(i64 k) const {
    auto t = terms_;
    for (auto& [e, coeff] : t) {
        (void)e;
        coeff = coeff.div_p(k);
    }
    return LaurentElem(alg_, std::move(t));
}

WittElem LaurentElem::coeff(i64 exp) const {
    for (const auto& [e, c] : terms_)
        if (e == exp) return c;
    return alg_->coeffs()->zero();
}

LaurentElem LaurentElem::zero_like() const { return alg_->zero(); }
LaurentElem LaurentElem::one_like() const { return alg_->one(); }

LaurentAlgebraPtr LaurentAlgebra::create(WittRingPtr coeffs) {
    return LaurentAlgebraPtr(new LaurentAlgebra(std::move(coeffs)));
}

LaurentElem LaurentAlgebra::zero() const { return LaurentElem(shared_from_this(), {}); }

LaurentElem LaurentAlgebra::one() const { return term(coeffs_->one(), 0); }

LaurentElem LaurentAlgebra::t(i64 exp) const { return term(coeffs_->one(), exp); }

LaurentElem LaurentAlgebra::term(const WittElem& c, i64 exp) const {
    return LaurentElem(shared_from_this(), {{exp, c}});
}

LaurentElem LaurentAlgebra::from_terms(std::vector<std::pair<i64, WittElem>> terms) const {
    return LaurentElem(shared_from_this(), std::move(terms));
}

LaurentElem LaurentAlgebra::constant(const WittElem& c) const { return term(c, 0); }

bool LaurentAlgebra::same_algebra(const LaurentAlgebra& o) const {
    return coeffs_->same_ring(*o.coeffs_);
}

LaurentElem map_coeffs(const LaurentElem& x, const std::function<WittElem(const WittElem&)>& f,
                       const LaurentAlgebraPtr& target) {
    std::vector<std::pair<i64, WittElem>> t;
    for (const auto& [e, c] : x.terms()) t.emplace_back(e, f(c));
    return LaurentElem(target, std::move(t));
}

FrobeniusLift::FrobeniusLift(LaurentAlgebraPtr alg, LaurentElem image_of_t)
    : alg_(std::move(alg)), image_(std::move(image_of_t)) {
    // invariant: F(t) == t^p mod p
    LaurentElem residual = image_ - alg_->t(alg_->p());
    if (residual.val() < 1)
        throw InvalidArgument("FrobeniusLift: image of t must be congruent to t^p mod p");
    image_inv_ = image_.inverse();
}

FrobeniusLift FrobeniusLift::standard(const LaurentAlgebraPtr& alg) {
    return FrobeniusLift(alg, alg->t(alg->p()));
}

LaurentElem FrobeniusLift::apply(const LaurentElem& x) const {
    LaurentElem acc = alg_->zero();
    for (const auto& [e, c] : x.terms()) {
        LaurentElem tpow = e >= 0 ? image_.pow(e) : image_inv_.pow(-e);
        acc = acc + tpow.scaled(sigma(c));
    }
    return acc;
}

LaurentElem FrobeniusLift::apply_pow(const LaurentElem& x, i64 s) const {
    LaurentElem r = x;
    for (i64 i = 0; i < s; ++i) r = apply(r);
    return r;
}

LaurentElem FrobeniusLift::image_pow(i64 s) const {
    // F^s(t)
    LaurentElem r = alg_->t(1);
    for (i64 i = 0; i < s; ++i) r = apply(r);
    return r;
}

bool FrobeniusLift::operator==(const FrobeniusLift& o) const { return image_ == o.image_; }

LaurentMat laurent_mat_map(const LaurentMat& a, const std::function<LaurentElem(const LaurentElem&)>& f) {
    return a.map(f);
}

LaurentMat laurent_mat_derivative(const LaurentMat& a) {
    return a.map([](const LaurentElem& x) { return x.derivative(); });
}

LaurentElem reduce_laurent(const LaurentElem& x, const LaurentAlgebraPtr& target) {
    return map_coeffs(x, [&](const WittElem& c) { return reduce_level(c, target->coeffs()); }, target);
}

LaurentMat reduce_laurent_mat(const LaurentMat& a, const LaurentAlgebraPtr& target) {
    return a.map([&](const LaurentElem& x) { return reduce_laurent(x, target); });
}

FrobeniusLift reduce_lift(const FrobeniusLift& F, const LaurentAlgebraPtr& target) {
    return FrobeniusLift(target, reduce_laurent(F.image_of_t(), target));
}

}  // namespace wittflow
