#ifndef BSERIES_BUTCHER_HPP
#define BSERIES_BUTCHER_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scalar.hpp"
#include "trees.hpp"

namespace bseries {

/// Exact rational coefficients δ_u for every tree with at most `cap` vertices.
///
/// A BMap is group-like when δ_∅ = 1 (a point of the Butcher group, e.g. the
/// expansion of an integrator step) and algebra-like when δ_∅ = 0 (a modified
/// vector field). Coefficients follow the 1/σ(u) normalization, so the exact
/// flow has δ_u = 1/u!.
class BMap
{
  public:
	explicit BMap(std::size_t cap) : cat_(&tree_catalog(cap)), c_(cat_->size(), Rational(0)) {}

	static BMap unit(std::size_t cap)
	{
		BMap m(cap);
		m.c_[0] = 1;
		return m;
	}

	std::size_t grade_cap() const { return cat_->cap(); }
	const TreeCatalog &catalog() const { return *cat_; }
	std::size_t size() const { return c_.size(); }

	const Rational &operator[](const RootedTree &t) const { return c_[cat_->index(t)]; }
	void set(const RootedTree &t, Rational value) { c_[cat_->index(t)] = std::move(value); }

	const Rational &at(std::size_t i) const { return c_.at(i); }
	Rational &at(std::size_t i) { return c_.at(i); }

	bool is_group_like() const { return c_[0] == 1; }
	bool is_algebra_like() const { return c_[0] == 0; }

	/// Same coefficients restricted to trees of order ≤ cap (cap ≤ grade_cap()).
	BMap truncated(std::size_t cap) const
	{
		if (cap > grade_cap())
			throw std::invalid_argument("cannot extend a BMap beyond its grade cap");
		BMap r(cap);
		for (std::size_t i = 0; i < r.size(); ++i)
			r.c_[i] = c_[i];
		return r;
	}

	friend bool operator==(const BMap &a, const BMap &b)
	{
		return a.grade_cap() == b.grade_cap() && a.c_ == b.c_;
	}

  private:
	const TreeCatalog *cat_;
	std::vector<Rational> c_;
};

/// Butcher tableau with exact entries; the abscissae c_i are not stored.
struct RKTableau
{
	std::string name;
	std::vector<std::vector<Rational>> A;
	std::vector<Rational> b;

	std::size_t stages() const { return b.size(); }

	void validate() const
	{
		if (b.empty())
			throw std::invalid_argument("tableau needs at least one stage");
		if (A.size() != b.size())
			throw std::invalid_argument("tableau matrix A must have one row per weight");
		for (auto const &row : A)
			if (row.size() != b.size())
				throw std::invalid_argument("tableau matrix A must be square");
	}

	/// No stage depends on itself or on a later stage.
	bool is_explicit() const
	{
		for (std::size_t i = 0; i < A.size(); ++i)
			for (std::size_t j = i; j < A.size(); ++j)
				if (A[i][j] != 0)
					return false;
		return true;
	}
};

/// Coefficients 1/u! of the exact solution flow.
inline BMap exact_flow_bmap(std::size_t cap)
{
	BMap m(cap);
	for (std::size_t i = 0; i < m.size(); ++i)
		m.at(i) = Rational(1, m.catalog().density(i));
	return m;
}

/// Elementary weights c_u of a Runge–Kutta tableau.
inline BMap elementary_weights(const RKTableau &t, std::size_t cap)
{
	t.validate();
	const std::size_t s = t.stages();
	BMap m(cap);
	auto const &cat = m.catalog();
	// stage[i] holds the internal weights Φ_k(u), k = 1..s, of tree i
	std::vector<std::vector<Rational>> stage(cat.size());
	m.at(0) = 1;
	for (std::size_t i = 1; i < cat.size(); ++i)
	{
		std::vector<Rational> phi(s, Rational(1));
		for (auto const &child : cat.tree(i).children())
		{
			auto const &g = stage[cat.index(child)];
			for (std::size_t k = 0; k < s; ++k)
			{
				Rational sum = 0;
				for (std::size_t l = 0; l < s; ++l)
					sum += t.A[k][l] * g[l];
				phi[k] *= sum;
			}
		}
		Rational c = 0;
		for (std::size_t k = 0; k < s; ++k)
			c += t.b[k] * phi[k];
		m.at(i) = c;
		stage[i] = std::move(phi);
	}
	return m;
}

namespace detail {

inline void require_same_cap(const BMap &a, const BMap &b)
{
	if (a.grade_cap() != b.grade_cap())
		throw std::invalid_argument("BMaps have different grade caps");
}

inline BMap compose_unchecked(const BMap &delta, const BMap &gamma)
{
	BMap zeta(delta.grade_cap());
	auto const &cat = delta.catalog();
	for (std::size_t i = 0; i < cat.size(); ++i)
	{
		Rational sum = 0;
		for (auto const &term : cat.coproduct(i))
		{
			if (delta.at(term.remainder) == 0)
				continue;
			Rational p = Rational(term.multiplicity) * delta.at(term.remainder);
			for (std::size_t r : term.removed)
				p *= gamma.at(r);
			sum += p;
		}
		zeta.at(i) = sum;
	}
	return zeta;
}

/// Polynomial in t with rational coefficients, lowest degree first.
using TimePolynomial = std::vector<Rational>;

inline TimePolynomial multiply(const TimePolynomial &a, const TimePolynomial &b)
{
	if (a.empty() || b.empty())
		return {};
	TimePolynomial r(a.size() + b.size() - 1, Rational(0));
	for (std::size_t i = 0; i < a.size(); ++i)
		for (std::size_t j = 0; j < b.size(); ++j)
			r[i + j] += a[i] * b[j];
	return r;
}

inline void add_scaled(TimePolynomial &acc, const TimePolynomial &p, const Rational &s)
{
	if (acc.size() < p.size())
		acc.resize(p.size(), Rational(0));
	for (std::size_t i = 0; i < p.size(); ++i)
		acc[i] += s * p[i];
}

inline TimePolynomial integrate(const TimePolynomial &p)
{
	TimePolynomial r(p.size() + 1, Rational(0));
	for (std::size_t i = 0; i < p.size(); ++i)
		r[i + 1] = p[i] / Rational(i + 1);
	return r;
}

inline Rational at_one(const TimePolynomial &p)
{
	Rational s = 0;
	for (auto const &c : p)
		s += c;
	return s;
}

// d/dt γ_u(t) summed over prunings with β on the remainder, skipping the
// unpruned term (remainder = u) which the callers handle separately.
inline TimePolynomial flow_rhs_without_self(const BMap &beta, const std::vector<TimePolynomial> &gamma,
                                            std::size_t i)
{
	auto const &cat = beta.catalog();
	TimePolynomial rhs;
	for (auto const &term : cat.coproduct(i))
	{
		if (term.remainder == i || beta.at(term.remainder) == 0)
			continue;
		TimePolynomial p{Rational(term.multiplicity) * beta.at(term.remainder)};
		for (std::size_t r : term.removed)
			p = multiply(p, gamma[r]);
		add_scaled(rhs, p, Rational(1));
	}
	return rhs;
}

} // namespace detail

/// ζ with B_ζ(x) = B_δ(B_γ(x)): δ sits on the pruned remainder, γ on the
/// removed pieces. γ must be group-like.
inline BMap compose(const BMap &delta, const BMap &gamma)
{
	detail::require_same_cap(delta, gamma);
	if (!gamma.is_group_like())
		throw std::invalid_argument("compose: right operand must be group-like");
	return detail::compose_unchecked(delta, gamma);
}

/// θ^{|u|} γ_u; absorbs a step-size factor into the coefficients.
inline BMap scale(const BMap &gamma, const Rational &theta)
{
	BMap r = gamma;
	Rational power = 1;
	std::size_t current = 0;
	for (std::size_t i = 0; i < r.size(); ++i)
	{
		while (current < r.catalog().order(i))
		{
			power *= theta;
			++current;
		}
		r.at(i) *= power;
	}
	return r;
}

/// Group inverse, solved grade by grade from compose(γ, γ⁻¹) = unit.
inline BMap inverse(const BMap &gamma)
{
	if (!gamma.is_group_like())
		throw std::invalid_argument("inverse: argument must be group-like");
	auto const &cat = gamma.catalog();
	BMap inv = BMap::unit(gamma.grade_cap());
	for (std::size_t i = 1; i < cat.size(); ++i)
	{
		Rational sum = 0;
		for (auto const &term : cat.coproduct(i))
		{
			if (term.remainder == 0)
				continue; // γ_∅ · inv_u, the unknown
			Rational p = Rational(term.multiplicity) * gamma.at(term.remainder);
			for (std::size_t r : term.removed)
				p *= inv.at(r);
			sum += p;
		}
		inv.at(i) = -sum;
	}
	return inv;
}

/// Coefficients of the adjoint method: the inverse map taken with step −h.
inline BMap adjoint(const BMap &gamma) { return scale(inverse(gamma), Rational(-1)); }

/// Largest ν ≤ max_order with γ_u = 1/u! for all 1 ≤ |u| ≤ ν.
inline std::size_t order_of(const BMap &gamma, std::size_t max_order)
{
	if (max_order > gamma.grade_cap())
		throw std::invalid_argument("order_of: max_order exceeds the grade cap");
	if (!gamma.is_group_like())
		throw std::invalid_argument("order_of: argument must be group-like");
	auto const &cat = gamma.catalog();
	for (std::size_t n = 1; n <= max_order; ++n)
	{
		auto [first, last] = cat.grade(n);
		for (std::size_t i = first; i < last; ++i)
			if (gamma.at(i) != Rational(1, cat.density(i)))
				return n - 1;
	}
	return max_order;
}

struct OrderCondition
{
	RootedTree tree;
	Rational value; // required elementary weight 1/u!
};

/// One condition c_u = 1/u! per tree with 1 ≤ |u| ≤ p.
inline std::vector<OrderCondition> order_conditions(std::size_t p)
{
	if (p < 1)
		throw std::invalid_argument("order_conditions: order must be at least 1");
	std::vector<OrderCondition> out;
	for (std::size_t n = 1; n <= p; ++n)
		for (auto &t : enumerate_trees(n))
		{
			Rational v(1, density(t));
			out.push_back({std::move(t), v});
		}
	return out;
}

/// Outcome of a pairwise identity check over trees; `witness` is the first
/// (u, v) in catalog order for which the identity fails.
struct PairCheck
{
	bool holds = true;
	std::optional<std::pair<RootedTree, RootedTree>> witness;

	explicit operator bool() const { return holds; }
};

namespace detail {

template <class Identity> PairCheck check_pairs(const BMap &m, std::size_t max_order, Identity identity)
{
	if (max_order > m.grade_cap())
		throw std::invalid_argument("max order exceeds the grade cap");
	auto const &cat = m.catalog();
	for (std::size_t i = 1; i < cat.size(); ++i)
		for (std::size_t j = 1; j < cat.size(); ++j)
		{
			if (cat.order(i) + cat.order(j) > max_order)
				continue;
			auto const &u = cat.tree(i);
			auto const &v = cat.tree(j);
			auto uv = cat.index(butcher_product(u, v));
			auto vu = cat.index(butcher_product(v, u));
			if (!identity(m.at(uv) + m.at(vu), m.at(i), m.at(j)))
				return {false, std::make_pair(u, v)};
		}
	return {};
}

} // namespace detail

/// δ_{u∘v} + δ_{v∘u} = δ_u δ_v for nonempty u, v with |u|+|v| ≤ max_order.
inline PairCheck is_symplectic_coeffs(const BMap &delta, std::size_t max_order)
{
	if (!delta.is_group_like())
		throw std::invalid_argument("is_symplectic_coeffs: argument must be group-like");
	return detail::check_pairs(delta, max_order, [](const Rational &lhs, const Rational &du,
	                                                const Rational &dv) { return lhs == du * dv; });
}

/// β_{u∘v} + β_{v∘u} = 0 for nonempty u, v with |u|+|v| ≤ max_order.
inline PairCheck is_hamiltonian_field_coeffs(const BMap &beta, std::size_t max_order)
{
	if (!beta.is_algebra_like())
		throw std::invalid_argument("is_hamiltonian_field_coeffs: argument must be algebra-like");
	return detail::check_pairs(beta, max_order,
	                           [](const Rational &lhs, const Rational &, const Rational &) {
		                           return lhs == 0;
	                           });
}

/// b_i a_ij + b_j a_ji = b_i b_j for all stage pairs.
inline bool is_symplectic_tableau(const RKTableau &t)
{
	t.validate();
	for (std::size_t i = 0; i < t.stages(); ++i)
		for (std::size_t j = 0; j < t.stages(); ++j)
			if (t.b[i] * t.A[i][j] + t.b[j] * t.A[j][i] != t.b[i] * t.b[j])
				return false;
	return true;
}

/// Time-one flow of the vector field with coefficients β.
///
/// Solves γ'(t) = compose(β, γ(t)), γ(0) = unit, exactly: each γ_u(t) is a
/// polynomial in t obtained from lower-order trees, then evaluated at t = 1.
inline BMap exp_star(const BMap &beta)
{
	if (!beta.is_algebra_like())
		throw std::invalid_argument("exp_star: argument must be algebra-like");
	auto const &cat = beta.catalog();
	std::vector<detail::TimePolynomial> gamma(cat.size());
	gamma[0] = {Rational(1)};
	BMap out = BMap::unit(beta.grade_cap());
	for (std::size_t i = 1; i < cat.size(); ++i)
	{
		auto rhs = detail::flow_rhs_without_self(beta, gamma, i);
		detail::add_scaled(rhs, {beta.at(i)}, Rational(1));
		gamma[i] = detail::integrate(rhs);
		out.at(i) = detail::at_one(gamma[i]);
	}
	return out;
}

/// Modified-field coefficients β with exp_star(β) = γ (the B-series log).
inline BMap log_star(const BMap &gamma)
{
	if (!gamma.is_group_like())
		throw std::invalid_argument("log_star: argument must be group-like");
	auto const &cat = gamma.catalog();
	std::vector<detail::TimePolynomial> flow(cat.size());
	flow[0] = {Rational(1)};
	BMap beta(gamma.grade_cap());
	for (std::size_t i = 1; i < cat.size(); ++i)
	{
		// β_u enters γ_u(t) only through the linear term β_u t
		auto known = detail::integrate(detail::flow_rhs_without_self(beta, flow, i));
		beta.at(i) = gamma.at(i) - detail::at_one(known);
		detail::add_scaled(known, {Rational(0), beta.at(i)}, Rational(1));
		flow[i] = std::move(known);
	}
	return beta;
}

/// Order of the processed map χ⁻¹ ∘ ψ ∘ χ.
inline std::size_t effective_order(const BMap &psi, const BMap &chi, std::size_t max_order)
{
	return order_of(compose(inverse(chi), compose(psi, chi)), max_order);
}

} // namespace bseries

#endif // BSERIES_BUTCHER_HPP
