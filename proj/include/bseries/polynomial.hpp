#ifndef BSERIES_POLYNOMIAL_HPP
#define BSERIES_POLYNOMIAL_HPP

#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace bseries {

using Exponent = std::vector<int>;

/// Multivariate polynomial with coefficients in T, stored as a sorted map from
/// exponent vectors to nonzero coefficients.
template <class T> class Polynomial
{
  public:
	using value_type = T;

	explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

	static Polynomial constant(std::size_t nvars, const T &c)
	{
		Polynomial p(nvars);
		p.add_term(Exponent(nvars, 0), c);
		return p;
	}

	/// The coordinate function x_j.
	static Polynomial variable(std::size_t nvars, std::size_t j)
	{
		if (j >= nvars)
			throw std::out_of_range("variable index out of range");
		Exponent e(nvars, 0);
		e[j] = 1;
		Polynomial p(nvars);
		p.add_term(e, lift<T>(1));
		return p;
	}

	std::size_t nvars() const { return nvars_; }
	const std::map<Exponent, T> &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	int degree() const
	{
		int d = -1;
		for (auto const &[e, c] : terms_)
		{
			int s = 0;
			for (int k : e)
				s += k;
			d = std::max(d, s);
		}
		return d;
	}

	/// Adds c·x^e, merging with an existing term and dropping zeros.
	void add_term(const Exponent &e, const T &c)
	{
		if (e.size() != nvars_)
			throw std::invalid_argument("exponent vector has " + std::to_string(e.size()) +
			                            " entries, expected " + std::to_string(nvars_));
		for (int k : e)
			if (k < 0)
				throw std::invalid_argument("negative exponent");
		auto it = terms_.find(e);
		if (it == terms_.end())
		{
			if (!(c == T(0)))
				terms_.emplace(e, c);
			return;
		}
		it->second += c;
		if (it->second == T(0))
			terms_.erase(it);
	}

	Polynomial &operator+=(const Polynomial &o)
	{
		require_same(o);
		for (auto const &[e, c] : o.terms_)
			add_term(e, c);
		return *this;
	}
	Polynomial &operator-=(const Polynomial &o)
	{
		require_same(o);
		for (auto const &[e, c] : o.terms_)
			add_term(e, -c);
		return *this;
	}

	friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
	friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
	friend Polynomial operator-(const Polynomial &a) { return a * lift<T>(-1); }

	friend Polynomial operator*(const Polynomial &a, const Polynomial &b)
	{
		a.require_same(b);
		Polynomial r(a.nvars_);
		Exponent e(a.nvars_);
		for (auto const &[ea, ca] : a.terms_)
			for (auto const &[eb, cb] : b.terms_)
			{
				for (std::size_t k = 0; k < e.size(); ++k)
					e[k] = ea[k] + eb[k];
				r.add_term(e, ca * cb);
			}
		return r;
	}

	friend Polynomial operator*(const Polynomial &a, const T &s)
	{
		Polynomial r(a.nvars_);
		for (auto const &[e, c] : a.terms_)
			r.add_term(e, c * s);
		return r;
	}
	friend Polynomial operator*(const T &s, const Polynomial &a) { return a * s; }

	friend bool operator==(const Polynomial &a, const Polynomial &b)
	{
		return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
	}
	friend bool operator!=(const Polynomial &a, const Polynomial &b) { return !(a == b); }

	/// ∂/∂x_j.
	Polynomial partial(std::size_t j) const
	{
		if (j >= nvars_)
			throw std::out_of_range("partial derivative index out of range");
		Polynomial r(nvars_);
		for (auto const &[e, c] : terms_)
		{
			if (e[j] == 0)
				continue;
			Exponent d = e;
			--d[j];
			r.add_term(d, c * lift<T>(e[j]));
		}
		return r;
	}

	template <class U> Polynomial<U> cast() const
	{
		Polynomial<U> r(nvars_);
		for (auto const &[e, c] : terms_)
			r.add_term(e, lift<U>(c));
		return r;
	}

	/// Value at x; coefficients are lifted into the scalar type of x.
	template <class U> U evaluate(const std::vector<U> &x) const
	{
		require_point(x.size());
		U sum = lift<U>(0);
		for (auto const &[e, c] : terms_)
		{
			U m = lift<U>(c);
			for (std::size_t j = 0; j < nvars_; ++j)
				for (int k = 0; k < e[j]; ++k)
					m = m * x[j];
			sum += m;
		}
		return sum;
	}

	/// m-th Frechet derivative at x applied to the vectors vs[0..m-1].
	template <class U> U derivative_apply(const std::vector<U> &x, const std::vector<std::vector<U>> &vs) const
	{
		require_point(x.size());
		for (auto const &v : vs)
			require_point(v.size());
		U sum = lift<U>(0);
		for (auto const &[e, c] : terms_)
		{
			Exponent left = e;
			sum += lift<U>(c) * detail_apply(x, vs, left, 0);
		}
		return sum;
	}

	friend std::ostream &operator<<(std::ostream &os, const Polynomial &p)
	{
		if (p.terms_.empty())
			return os << "0";
		bool first = true;
		for (auto const &[e, c] : p.terms_)
		{
			os << (first ? "" : " + ") << "(" << c << ")";
			for (std::size_t j = 0; j < e.size(); ++j)
				if (e[j])
					os << "*x" << j + 1 << (e[j] > 1 ? "^" + std::to_string(e[j]) : "");
			first = false;
		}
		return os;
	}

  private:
	void require_same(const Polynomial &o) const
	{
		if (o.nvars_ != nvars_)
			throw std::invalid_argument("polynomials in different numbers of variables");
	}
	void require_point(std::size_t n) const
	{
		if (n != nvars_)
			throw std::invalid_argument("point has dimension " + std::to_string(n) + ", polynomial expects " +
			                            std::to_string(nvars_));
	}

	// Differentiates the monomial x^left once per remaining vector, in every
	// direction, and evaluates at x once all vectors are consumed.
	template <class U>
	U detail_apply(const std::vector<U> &x, const std::vector<std::vector<U>> &vs, Exponent &left,
	               std::size_t k) const
	{
		if (k == vs.size())
		{
			U m = lift<U>(1);
			for (std::size_t j = 0; j < nvars_; ++j)
				for (int p = 0; p < left[j]; ++p)
					m = m * x[j];
			return m;
		}
		U sum = lift<U>(0);
		for (std::size_t j = 0; j < nvars_; ++j)
		{
			int power = left[j];
			if (power == 0)
				continue;
			--left[j];
			sum += lift<U>(power) * vs[k][j] * detail_apply(x, vs, left, k + 1);
			++left[j];
		}
		return sum;
	}

	std::size_t nvars_;
	std::map<Exponent, T> terms_;
};

/// Vector of polynomials sharing one set of variables.
///
/// Vector fields have as many components as variables; the extended word
/// basis uses maps from the y-variables into the full (y, θ) space, so the
/// two counts may differ.
template <class T> class PolyMap
{
  public:
	using value_type = T;

	PolyMap() = default;
	PolyMap(std::size_t nvars, std::size_t ncomps) : nvars_(nvars), comps_(ncomps, Polynomial<T>(nvars)) {}
	explicit PolyMap(std::vector<Polynomial<T>> comps) : comps_(std::move(comps))
	{
		if (comps_.empty())
			throw std::invalid_argument("PolyMap needs at least one component");
		nvars_ = comps_[0].nvars();
		for (auto const &c : comps_)
			if (c.nvars() != nvars_)
				throw std::invalid_argument("PolyMap components use different numbers of variables");
	}

	/// f(x) = x.
	static PolyMap identity(std::size_t n)
	{
		PolyMap m(n, n);
		for (std::size_t j = 0; j < n; ++j)
			m.comps_[j] = Polynomial<T>::variable(n, j);
		return m;
	}

	std::size_t nvars() const { return nvars_; }
	std::size_t dim() const { return comps_.size(); }
	const Polynomial<T> &operator[](std::size_t i) const { return comps_.at(i); }
	Polynomial<T> &operator[](std::size_t i) { return comps_.at(i); }
	const std::vector<Polynomial<T>> &components() const { return comps_; }

	bool is_zero() const
	{
		for (auto const &c : comps_)
			if (!c.is_zero())
				return false;
		return true;
	}

	template <class U> std::vector<U> evaluate(const std::vector<U> &x) const
	{
		std::vector<U> r;
		r.reserve(comps_.size());
		for (auto const &c : comps_)
			r.push_back(c.evaluate(x));
		return r;
	}

	template <class U>
	std::vector<U> derivative_apply(const std::vector<U> &x, const std::vector<std::vector<U>> &vs) const
	{
		std::vector<U> r;
		r.reserve(comps_.size());
		for (auto const &c : comps_)
			r.push_back(c.derivative_apply(x, vs));
		return r;
	}

	/// The polynomial map x ↦ ∂F(x)·g(x).
	PolyMap jacobian_apply(const PolyMap &g) const
	{
		if (g.dim() != nvars_ || g.nvars_ != nvars_)
			throw std::invalid_argument("jacobian_apply: dimension mismatch");
		PolyMap r(nvars_, dim());
		for (std::size_t i = 0; i < dim(); ++i)
			for (std::size_t j = 0; j < nvars_; ++j)
			{
				auto d = comps_[i].partial(j);
				if (!d.is_zero())
					r.comps_[i] += d * g.comps_[j];
			}
		return r;
	}

	/// First `n` components, same variables.
	PolyMap head(std::size_t n) const
	{
		if (n > dim())
			throw std::out_of_range("PolyMap::head beyond dimension");
		return PolyMap(nvars_, std::vector<Polynomial<T>>(comps_.begin(), comps_.begin() + n));
	}

	template <class U> PolyMap<U> cast() const
	{
		PolyMap<U> r(nvars_, dim());
		for (std::size_t i = 0; i < dim(); ++i)
			r[i] = comps_[i].template cast<U>();
		return r;
	}

	PolyMap &operator+=(const PolyMap &o)
	{
		require_same(o);
		for (std::size_t i = 0; i < dim(); ++i)
			comps_[i] += o.comps_[i];
		return *this;
	}
	PolyMap &operator-=(const PolyMap &o)
	{
		require_same(o);
		for (std::size_t i = 0; i < dim(); ++i)
			comps_[i] -= o.comps_[i];
		return *this;
	}
	friend PolyMap operator+(PolyMap a, const PolyMap &b) { return a += b; }
	friend PolyMap operator-(PolyMap a, const PolyMap &b) { return a -= b; }
	friend PolyMap operator*(const T &s, PolyMap a)
	{
		for (auto &c : a.comps_)
			c = c * s;
		return a;
	}
	friend PolyMap operator*(PolyMap a, const T &s) { return s * std::move(a); }

	friend bool operator==(const PolyMap &a, const PolyMap &b)
	{
		return a.nvars_ == b.nvars_ && a.comps_ == b.comps_;
	}
	friend bool operator!=(const PolyMap &a, const PolyMap &b) { return !(a == b); }

  private:
	PolyMap(std::size_t nvars, std::vector<Polynomial<T>> comps) : nvars_(nvars), comps_(std::move(comps)) {}

	void require_same(const PolyMap &o) const
	{
		if (o.nvars_ != nvars_ || o.dim() != dim())
			throw std::invalid_argument("PolyMaps have different shapes");
	}

	std::size_t nvars_ = 0;
	std::vector<Polynomial<T>> comps_;
};

} // namespace bseries

#endif // BSERIES_POLYNOMIAL_HPP
