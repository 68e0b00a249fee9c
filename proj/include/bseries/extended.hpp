#ifndef BSERIES_EXTENDED_HPP
#define BSERIES_EXTENDED_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polynomial.hpp"
#include "series.hpp"
#include "words.hpp"

namespace bseries {

/// Pair (v, δ): a shift of the angles plus word coefficients over a mode
/// alphabet. It is a group member when δ is a group element.
struct ExtCoeffs
{
	std::vector<Complex> shift;
	WMap<Complex> coeffs;

	const Alphabet &alphabet() const { return coeffs.alphabet(); }
	std::size_t cap() const { return coeffs.cap(); }

	static ExtCoeffs unit(const Alphabet &modes, std::size_t cap)
	{
		return {std::vector<Complex>(modes.mode_dim(), 0.0), WMap<Complex>::unit(modes, cap)};
	}
};

/// Frequencies must be strictly positive.
inline void validate_frequencies(const std::vector<double> &omega)
{
	if (omega.empty())
		throw std::invalid_argument("frequency vector is empty");
	for (double w : omega)
		if (!(w > 0))
			throw std::invalid_argument("frequencies must be strictly positive");
}

namespace detail {

inline Complex mode_pairing(const std::vector<int> &K, const std::vector<Complex> &v)
{
	if (K.size() != v.size())
		throw std::invalid_argument("shift vector has " + std::to_string(v.size()) +
		                            " entries, modes have dimension " + std::to_string(K.size()));
	Complex s = 0;
	for (std::size_t j = 0; j < K.size(); ++j)
		s += double(K[j]) * v[j];
	return s;
}

inline void require_modes(const Alphabet &a)
{
	if (!a.has_modes())
		throw std::invalid_argument("extended coefficients need an integer-mode alphabet");
}

} // namespace detail

/// (Ξ_v δ)_w = exp(i (k₁+⋯+kₙ)·v) δ_w.
inline WMap<Complex> xi_big(const std::vector<Complex> &v, const WMap<Complex> &delta)
{
	auto const &alph = delta.alphabet();
	detail::require_modes(alph);
	WMap<Complex> r = delta;
	for (std::size_t i = 1; i < r.size(); ++i)
		r.at(i) *= std::exp(Complex(0, 1) * detail::mode_pairing(alph.mode_sum(r.word(i)), v));
	return r;
}

/// (ξ_v δ)_w = i (k₁+⋯+kₙ)·v δ_w, with (ξ_v δ)_∅ = 0.
inline WMap<Complex> xi_small(const std::vector<Complex> &v, const WMap<Complex> &delta)
{
	auto const &alph = delta.alphabet();
	detail::require_modes(alph);
	WMap<Complex> r = delta;
	r.at(0) = 0;
	for (std::size_t i = 1; i < r.size(); ++i)
		r.at(i) *= Complex(0, 1) * detail::mode_pairing(alph.mode_sum(r.word(i)), v);
	return r;
}

/// (u, γ) ★ (v, δ) = (γ_∅ v + δ_∅ u, γ ⋆ Ξ_u δ); the left operand must be a
/// group member (checked through the cap with tolerance `tol`).
inline ExtCoeffs bigstar(const ExtCoeffs &lhs, const ExtCoeffs &rhs, double tol = 1e-10)
{
	if (lhs.shift.size() != rhs.shift.size())
		throw std::invalid_argument("bigstar: shift vectors have different dimensions");
	if (!is_group_element(lhs.coeffs, lhs.cap(), tol))
		throw std::invalid_argument("bigstar: left operand is not a group member");
	Complex g0 = lhs.coeffs.at(0), d0 = rhs.coeffs.at(0);
	std::vector<Complex> shift;
	for (std::size_t j = 0; j < lhs.shift.size(); ++j)
		shift.push_back(g0 * rhs.shift[j] + d0 * lhs.shift[j]);
	return {std::move(shift), convolution(lhs.coeffs, xi_big(lhs.shift, rhs.coeffs))};
}

/// [(v, δ), (u, η)] = (0, ξ_v η − ξ_u δ + δ⋆η − η⋆δ) for Lie elements δ, η.
inline ExtCoeffs ext_bracket(const ExtCoeffs &a, const ExtCoeffs &b, double tol = 1e-10)
{
	if (a.shift.size() != b.shift.size())
		throw std::invalid_argument("ext_bracket: shift vectors have different dimensions");
	if (!is_lie_element(a.coeffs, a.cap(), tol) || !is_lie_element(b.coeffs, b.cap(), tol))
		throw std::invalid_argument("ext_bracket: word parts must be Lie elements");
	return {std::vector<Complex>(a.shift.size(), 0.0),
	        xi_small(a.shift, b.coeffs) - xi_small(b.shift, a.coeffs) + lie_bracket(a.coeffs, b.coeffs)};
}

/// Coefficients (tω, α(t)) of the exact t-flow, with λ_k(t) = exp(i k·ω t).
inline ExtCoeffs flow_coeffs(const std::vector<double> &omega, double t, const Alphabet &modes, std::size_t cap)
{
	validate_frequencies(omega);
	detail::require_modes(modes);
	std::vector<Complex> shift;
	for (double w : omega)
		shift.emplace_back(t * w);
	return {std::move(shift), iterated_integral_coeffs(LambdaSpec::oscillatory(omega, modes), modes, t, cap)};
}

/// Perturbed integrable problem dy/dt = f_y, dθ/dt = ω + f_θ with
/// f(y, θ) = Σ_k exp(i k·θ) f̂_k(y) over a finite mode set.
///
/// Each f̂_k is a polynomial map from the D−d variables y into all D
/// components of (y, θ).
struct PerturbedProblem
{
	std::vector<double> omega;
	Alphabet modes;
	std::vector<PolyMap<Complex>> fhat; // indexed like the alphabet

	std::size_t d() const { return omega.size(); }
	std::size_t dim() const { return fhat.at(0).dim(); }
	std::size_t y_dim() const { return dim() - d(); }

	/// Shapes, positive frequencies, and the reality pairing f̂_{−k} = conj(f̂_k).
	void validate(double tol = 1e-12) const
	{
		validate_frequencies(omega);
		detail::require_modes(modes);
		if (modes.mode_dim() != omega.size())
			throw std::invalid_argument("modes and frequencies have different dimensions");
		if (fhat.size() != modes.size())
			throw std::invalid_argument("one f̂ is needed per mode");
		std::size_t D = fhat[0].dim();
		if (D <= omega.size())
			throw std::invalid_argument("the state must contain at least one non-angle variable");
		for (auto const &f : fhat)
			if (f.dim() != D || f.nvars() != D - omega.size())
				throw std::invalid_argument("f̂ must map the y-variables into the full state");
		for (std::size_t a = 0; a < modes.size(); ++a)
		{
			std::vector<int> neg = modes.mode(int(a));
			for (int &k : neg)
				k = -k;
			auto name = Alphabet::mode_name(neg);
			auto it = std::find(modes.names().begin(), modes.names().end(), name);
			if (it == modes.names().end())
			{
				if (!fhat[a].is_zero())
					throw std::invalid_argument("mode " + modes.name(int(a)) +
					                            " has no conjugate partner; the problem would not be real");
				continue;
			}
			auto const &partner = fhat[std::size_t(it - modes.names().begin())];
			if (!conjugate_close(fhat[a], partner, tol))
				throw std::invalid_argument("f̂ for modes " + modes.name(int(a)) + " and " + name +
				                            " are not mutually conjugate");
		}
	}

	/// The real field (0, ω) + f(y, θ) evaluated at a real state.
	std::vector<double> field(const std::vector<double> &x) const
	{
		std::size_t m = y_dim();
		std::vector<Complex> y(x.begin(), x.begin() + std::ptrdiff_t(m));
		std::vector<Complex> sum(dim(), 0.0);
		for (std::size_t a = 0; a < modes.size(); ++a)
		{
			double phase = 0;
			auto const &k = modes.mode(int(a));
			for (std::size_t j = 0; j < d(); ++j)
				phase += k[j] * x[m + j];
			Complex e = std::exp(Complex(0, phase));
			auto v = fhat[a].evaluate(y);
			for (std::size_t i = 0; i < dim(); ++i)
				sum[i] += e * v[i];
		}
		std::vector<double> out(dim());
		for (std::size_t i = 0; i < dim(); ++i)
			out[i] = sum[i].real() + (i >= m ? omega[i - m] : 0.0);
		return out;
	}

	/// Only the perturbation f(y, θ), without the rotation.
	std::vector<double> perturbation(const std::vector<double> &x) const
	{
		auto f = field(x);
		for (std::size_t j = 0; j < d(); ++j)
			f[y_dim() + j] -= omega[j];
		return f;
	}

  private:
	static bool conjugate_close(const PolyMap<Complex> &f, const PolyMap<Complex> &g, double tol)
	{
		for (std::size_t i = 0; i < f.dim(); ++i)
		{
			auto const &tf = f[i].terms();
			auto const &tg = g[i].terms();
			for (auto const &[e, c] : tf)
			{
				auto it = tg.find(e);
				Complex other = it == tg.end() ? Complex(0) : it->second;
				if (std::abs(std::conj(c) - other) > tol * std::max(1.0, std::abs(c)))
					return false;
			}
			for (auto const &[e, c] : tg)
				if (tf.find(e) == tf.end() && std::abs(c) > tol)
					return false;
		}
		return true;
	}
};

/// f_w(y, θ) = exp(i K_w·θ) g_w(y) with K_w the mode sum of w.
struct PhasedMap
{
	std::vector<int> K;
	PolyMap<Complex> g;
};

/// Word basis of a perturbed problem: f_k = exp(i k·θ) f̂_k(y) and
/// f_{k₁⋯kₙ} = ∂f_{k₂⋯kₙ} · f_{k₁}, the Jacobian taken in (y, θ).
class ExtendedBasis
{
  public:
	explicit ExtendedBasis(PerturbedProblem problem) : p_(std::move(problem)) { p_.validate(); }

	const PerturbedProblem &problem() const { return p_; }

	const PhasedMap &operator()(const Word &w)
	{
		if (w.empty())
			throw std::invalid_argument("the empty word has no phased form");
		auto it = cache_.find(w);
		if (it != cache_.end())
			return it->second;
		PhasedMap value;
		int first = w[0];
		if (first < 0 || std::size_t(first) >= p_.modes.size())
			throw std::invalid_argument("letter index outside the mode set");
		auto const &g1 = p_.fhat[std::size_t(first)];
		if (w.size() == 1)
			value = {p_.modes.mode(first), g1};
		else
		{
			Word rest(w.begin() + 1, w.end());
			PhasedMap tail = (*this)(rest);
			std::size_t m = p_.y_dim();
			// y-derivative of g_tail applied to the y-part of g₁
			PolyMap<Complex> g = tail.g.jacobian_apply(g1.head(m));
			// θ-derivative contributes i K_tail·(θ-part of g₁) times g_tail
			Polynomial<Complex> phase(m);
			for (std::size_t j = 0; j < p_.d(); ++j)
				if (tail.K[j] != 0)
					phase += g1[m + j] * Complex(0, tail.K[j]);
			if (!phase.is_zero())
				for (std::size_t i = 0; i < g.dim(); ++i)
					g[i] += tail.g[i] * phase;
			std::vector<int> K = tail.K;
			auto const &k1 = p_.modes.mode(first);
			for (std::size_t j = 0; j < K.size(); ++j)
				K[j] += k1[j];
			value = {std::move(K), std::move(g)};
		}
		return cache_.emplace(w, std::move(value)).first->second;
	}

	/// f_w(x) at x = (y, θ).
	template <class U> std::vector<U> evaluate(const Word &w, const std::vector<U> &x)
	{
		if (x.size() != p_.dim())
			throw std::invalid_argument("state has wrong dimension");
		if (w.empty())
			return x;
		auto const &pm = (*this)(w);
		std::size_t m = p_.y_dim();
		std::vector<U> y(x.begin(), x.begin() + std::ptrdiff_t(m));
		U theta = lift<U>(0);
		for (std::size_t j = 0; j < p_.d(); ++j)
			theta += lift<U>(double(pm.K[j])) * x[m + j];
		U e = expi(theta);
		auto v = pm.g.evaluate(y);
		for (auto &c : v)
			c = e * c;
		return v;
	}

  private:
	PerturbedProblem p_;
	std::map<Word, PhasedMap> cache_;
};

/// W̄_{(v,δ)}(x) = (0, v) + Σ_{|w|≤N} ε^{|w|} δ_w f_w(x).
///
/// The factor ε^{|w|} evaluates the series for the perturbation scaled by ε;
/// pass a truncated-series variable to expand in powers of the perturbation.
template <class U>
std::vector<U> ext_series_eval(const ExtCoeffs &c, ExtendedBasis &basis, const std::vector<U> &x, std::size_t N,
                               const U &epsilon)
{
	if (N > c.cap())
		throw std::invalid_argument("ext_series_eval: N exceeds the cap");
	auto const &p = basis.problem();
	if (c.alphabet() != p.modes)
		throw std::invalid_argument("coefficients and problem use different mode sets");
	if (c.shift.size() != p.d())
		throw std::invalid_argument("shift vector has wrong dimension");
	std::vector<U> out(x.size(), lift<U>(0));
	for (std::size_t i = 0; i < x.size(); ++i)
		out[i] = lift<U>(c.coeffs.at(0)) * x[i];
	for (std::size_t j = 0; j < p.d(); ++j)
		out[p.y_dim() + j] += lift<U>(c.shift[j]);
	U power = lift<U>(1);
	for (std::size_t n = 1; n <= N; ++n)
	{
		power = power * epsilon;
		auto [first, last] = c.coeffs.grade(n);
		for (std::size_t i = first; i < last; ++i)
		{
			if (c.coeffs.at(i) == Complex(0))
				continue;
			U s = power * lift<U>(c.coeffs.at(i));
			auto v = basis.evaluate(c.coeffs.word(i), x);
			for (std::size_t k = 0; k < x.size(); ++k)
				out[k] += s * v[k];
		}
	}
	return out;
}

template <class U>
std::vector<U> ext_series_eval(const ExtCoeffs &c, ExtendedBasis &basis, const std::vector<U> &x, std::size_t N)
{
	return ext_series_eval(c, basis, x, N, lift<U>(1));
}

} // namespace bseries

#endif // BSERIES_EXTENDED_HPP
