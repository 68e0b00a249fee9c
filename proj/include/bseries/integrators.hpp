#ifndef BSERIES_INTEGRATORS_HPP
#define BSERIES_INTEGRATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "butcher.hpp"
#include "extended.hpp"
#include "polynomial.hpp"
#include "splitting.hpp"
#include "vectorfields.hpp"

namespace bseries {

using State = std::vector<double>;
using Field = std::function<State(const State &)>;

/// Wraps a polynomial field as a floating-point right-hand side.
template <class T> Field as_field(const PolyMap<T> &f)
{
	detail::require_field(f);
	return [g = f.template cast<double>()](const State &x) { return g.evaluate(x); };
}

namespace detail {

inline double max_norm(const State &x)
{
	double m = 0;
	for (double v : x)
		m = std::max(m, std::abs(v));
	return m;
}

inline State combine(const State &x, double h, const std::vector<State> &K, const std::vector<double> &w)
{
	State y = x;
	for (std::size_t j = 0; j < K.size(); ++j)
		if (w[j] != 0)
			for (std::size_t i = 0; i < y.size(); ++i)
				y[i] += h * w[j] * K[j][i];
	return y;
}

} // namespace detail

/// One step of the Runge–Kutta method: stages X_i = x + h Σ a_ij f(X_j) and
/// x + h Σ b_i f(X_i). Implicit stages are solved by fixed-point iteration.
inline State rk_step(const RKTableau &t, const Field &f, const State &x, double h)
{
	t.validate();
	std::size_t s = t.stages();
	std::vector<std::vector<double>> A(s, std::vector<double>(s));
	std::vector<double> b(s);
	for (std::size_t i = 0; i < s; ++i)
	{
		b[i] = to_double(t.b[i]);
		for (std::size_t j = 0; j < s; ++j)
			A[i][j] = to_double(t.A[i][j]);
	}
	std::vector<State> K(s);
	if (t.is_explicit())
		for (std::size_t i = 0; i < s; ++i)
			K[i] = f(detail::combine(x, h, std::vector<State>(K.begin(), K.begin() + std::ptrdiff_t(i)), A[i]));
	else
	{
		State fx = f(x);
		for (auto &k : K)
			k = fx;
		double scale = std::max(1.0, detail::max_norm(x));
		bool converged = false;
		for (int it = 0; it < 100 && !converged; ++it)
		{
			std::vector<State> next(s);
			double change = 0;
			for (std::size_t i = 0; i < s; ++i)
			{
				next[i] = f(detail::combine(x, h, K, A[i]));
				for (std::size_t c = 0; c < x.size(); ++c)
					change = std::max(change, std::abs(h) * std::abs(next[i][c] - K[i][c]));
			}
			K = std::move(next);
			converged = change < 1e-14 * scale;
		}
		if (!converged)
			throw std::runtime_error("rk_step: fixed-point iteration for the implicit stages did not converge in 100 "
			                         "iterations (step too large?)");
	}
	return detail::combine(x, h, K, b);
}

inline State rk_integrate(const RKTableau &t, const Field &f, State x, double h, std::size_t steps)
{
	for (std::size_t n = 0; n < steps; ++n)
		x = rk_step(t, f, x, h);
	return x;
}

/// Classical fourth-order Runge–Kutta with a fixed number of equal steps.
inline State rk4_integrate(const Field &f, State x, double T, std::size_t steps)
{
	if (steps == 0)
		throw std::invalid_argument("rk4_integrate: need at least one step");
	double h = T / double(steps);
	for (std::size_t n = 0; n < steps; ++n)
	{
		State k1 = f(x);
		State k2 = f(detail::combine(x, h, {k1}, {0.5}));
		State k3 = f(detail::combine(x, h, {k1, k2}, {0, 0.5}));
		State k4 = f(detail::combine(x, h, {k1, k2, k3}, {0, 0, 1}));
		x = detail::combine(x, h, {k1, k2, k3, k4}, {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6});
	}
	return x;
}

struct ReferenceSolution
{
	State value;
	double error_estimate;
	std::size_t steps;
};

/// RK4 solution at time T, with the step count doubled until the Richardson
/// estimate |x_{2n} − x_n|/15 falls below tol (relative to max(1, |x|)).
inline ReferenceSolution reference_solution(const Field &f, const State &x0, double T, double tol = 1e-12,
                                            std::size_t max_steps = std::size_t(1) << 22)
{
	std::size_t n = std::max<std::size_t>(16, std::size_t(std::ceil(std::abs(T) * 8)));
	State coarse = rk4_integrate(f, x0, T, n);
	while (2 * n <= max_steps)
	{
		State fine = rk4_integrate(f, x0, T, 2 * n);
		double diff = 0;
		for (std::size_t i = 0; i < fine.size(); ++i)
			diff = std::max(diff, std::abs(fine[i] - coarse[i]));
		double estimate = diff / 15;
		if (!std::isfinite(estimate))
			throw std::runtime_error("reference solution diverged");
		n *= 2;
		if (estimate <= tol * std::max(1.0, detail::max_norm(fine)))
			return {fine, estimate, n};
		coarse = std::move(fine);
	}
	throw std::runtime_error("reference solution did not reach the requested accuracy");
}

/// One step ψ_h of a splitting scheme on a perturbed problem: exact rotations
/// θ ← θ + a_j hω alternate with the perturbation flow, the latter
/// approximated by RK4 micro-steps of size b_j h/substeps.
inline State splitting_step(const SplittingScheme &s, const PerturbedProblem &p, State x, double h,
                            std::size_t substeps = 64)
{
	s.validate();
	if (x.size() != p.dim())
		throw std::invalid_argument("state has wrong dimension for the problem");
	Field perturbation = [&p](const State &y) { return p.perturbation(y); };
	for (std::size_t j = 0; j < s.stages(); ++j)
	{
		for (std::size_t k = 0; k < p.d(); ++k)
			x[p.y_dim() + k] += s.a[j] * h * p.omega[k];
		if (s.b[j] != 0)
		{
			x = rk4_integrate(perturbation, x, s.b[j] * h, substeps);
			for (double v : x)
				if (!std::isfinite(v))
					throw std::runtime_error("splitting_step: perturbation flow diverged");
		}
	}
	return x;
}

inline State splitting_integrate(const SplittingScheme &s, const PerturbedProblem &p, State x, double h,
                                 std::size_t steps, std::size_t substeps = 64)
{
	for (std::size_t n = 0; n < steps; ++n)
		x = splitting_step(s, p, x, h, substeps);
	return x;
}

/// Field x ↦ (1/h) Σ_{1≤|u|≤N} h^{|u|} β_u/σ(u) ℱ_u(x) of a modified equation.
template <class T> Field modified_bseries_field(const BMap &beta, const PolyMap<T> &f, double h, std::size_t N)
{
	if (!beta.is_algebra_like())
		throw std::invalid_argument("modified field needs coefficients with β_∅ = 0");
	return [beta, g = f.template cast<double>(), h, N](const State &x) {
		State v = bseries_eval(beta, g, x, h, N);
		for (double &c : v)
			c /= h;
		return v;
	};
}

/// Real field W̄_{(ω,β)}(x) of an extended word series on a perturbed problem.
inline Field modified_ext_field(const ModifiedSystem &m, const PerturbedProblem &p)
{
	auto basis = std::make_shared<ExtendedBasis>(p);
	ExtCoeffs c{{}, m.beta};
	for (double w : m.omega)
		c.shift.emplace_back(w);
	return [basis, c, n = m.n](const State &x) {
		std::vector<Complex> xc(x.begin(), x.end());
		auto v = ext_series_eval(c, *basis, xc, n);
		State out(v.size());
		for (std::size_t i = 0; i < v.size(); ++i)
			out[i] = v[i].real();
		return out;
	};
}

struct ConvergenceRow
{
	double h;
	double error;
	double rate; // NaN on the first row
};

/// Errors for each step size; rate = log(e_{i−1}/e_i)/log(h_{i−1}/h_i), which
/// is log₂ of the error ratio when steps are halved.
inline std::vector<ConvergenceRow> convergence_table(const std::vector<double> &steps,
                                                     const std::function<double(double)> &error_at)
{
	for (std::size_t i = 1; i < steps.size(); ++i)
		if (!(steps[i] < steps[i - 1]))
			throw std::invalid_argument("step list must be strictly decreasing");
	for (double h : steps)
		if (!(h > 0))
			throw std::invalid_argument("step sizes must be positive");
	std::vector<ConvergenceRow> rows;
	for (double h : steps)
	{
		double e = error_at(h);
		double rate = std::numeric_limits<double>::quiet_NaN();
		if (!rows.empty())
			rate = std::log(rows.back().error / e) / std::log(rows.back().h / h);
		rows.push_back({h, e, rate});
	}
	return rows;
}

inline double max_difference(const State &a, const State &b)
{
	if (a.size() != b.size())
		throw std::invalid_argument("states have different dimensions");
	double m = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		m = std::max(m, std::abs(a[i] - b[i]));
	return m;
}

/// Number of steps of size h that cover T, rejecting step sizes that do not
/// divide the interval.
inline std::size_t step_count(double T, double h)
{
	double n = std::round(T / h);
	if (n < 1 || std::abs(n * h - T) > 1e-9 * std::max(1.0, std::abs(T)))
		throw std::invalid_argument("step " + std::to_string(h) + " does not divide the interval " +
		                            std::to_string(T));
	return std::size_t(n);
}

/// CSV with columns h, error, rate and 17 significant digits; the first rate
/// is left empty.
inline void write_csv(std::ostream &os, const std::vector<ConvergenceRow> &rows)
{
	auto num = [](double v) {
		char buf[40];
		std::snprintf(buf, sizeof buf, "%.17g", v);
		return std::string(buf);
	};
	os << "h,error,rate\n";
	for (auto const &r : rows)
		os << num(r.h) << ',' << num(r.error) << ',' << (std::isnan(r.rate) ? "" : num(r.rate)) << '\n';
}

} // namespace bseries

#endif // BSERIES_INTEGRATORS_HPP
