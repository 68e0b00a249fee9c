#ifndef BSERIES_EXPERIMENTS_HPP
#define BSERIES_EXPERIMENTS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "integrators.hpp"
#include "io.hpp"

namespace bseries {

/// One numerical experiment over a decreasing list of step sizes.
///
/// kind "convergence" measures the error of `method` (rk, bseries or
/// splitting) against a reference solution at time T; with T = 0 it measures
/// the error of a single step of size h instead. kind "modified-equation"
/// compares RK steps with the flow of the modified field built from trees of
/// order ≤ N, and kind "splitting-modified" compares splitting steps with the
/// flow of the modified system of grade N; both report the largest deviation
/// at the grid times in [0, T].
struct ExperimentConfig
{
	std::string kind = "convergence";
	std::string method = "rk";
	std::string tableau, scheme, field, problem; // resolved file paths
	State x0;
	std::vector<double> steps;
	double T = 1;
	std::size_t N = 4;
	std::size_t substeps = 16;
	std::string mode = "float";
	std::optional<std::pair<double, double>> expected_rate;
};

inline ExperimentConfig experiment_from_json(const Json &j, const std::filesystem::path &base_dir)
{
	ExperimentConfig c;
	c.kind = j.value("kind", c.kind);
	c.method = j.value("method", c.method);
	c.mode = j.value("mode", c.mode);
	if (c.kind != "convergence" && c.kind != "modified-equation" && c.kind != "splitting-modified")
		throw ParseError("unknown experiment kind '" + c.kind + "'");
	if (c.method != "rk" && c.method != "bseries" && c.method != "splitting")
		throw ParseError("unknown method '" + c.method + "'");
	if (c.mode != "float")
		throw ParseError("experiments run in float mode only");
	auto path = [&](const char *key) -> std::string {
		if (!j.contains(key))
			return "";
		auto p = std::filesystem::path(j.at(key).get<std::string>());
		return (p.is_absolute() ? p : base_dir / p).string();
	};
	c.tableau = path("tableau");
	c.scheme = path("scheme");
	c.field = path("field");
	c.problem = path("problem");
	c.x0 = detail::doubles_from_json(detail::field(j, "x0"), "\"x0\"");
	c.steps = detail::doubles_from_json(detail::field(j, "steps"), "\"steps\"");
	if (c.steps.empty())
		throw ParseError("\"steps\" must not be empty");
	for (std::size_t i = 1; i < c.steps.size(); ++i)
		if (!(c.steps[i] < c.steps[i - 1]))
			throw ParseError("\"steps\" must be strictly decreasing");
	for (double h : c.steps)
		if (!(h > 0))
			throw ParseError("step sizes must be positive");
	c.T = detail::double_from_json(j.value("T", Json(1.0)));
	if (c.T < 0)
		throw ParseError("\"T\" must be non-negative");
	c.N = j.value("N", c.N);
	c.substeps = j.value("substeps", c.substeps);
	if (j.contains("expected_rate"))
	{
		auto r = detail::doubles_from_json(j.at("expected_rate"), "\"expected_rate\"");
		if (r.size() != 2 || r[0] > r[1])
			throw ParseError("\"expected_rate\" must be [low, high]");
		c.expected_rate = std::make_pair(r[0], r[1]);
	}

	bool needs_scheme = c.method == "splitting" || c.kind == "splitting-modified";
	bool needs_tableau = (c.method == "rk" && !needs_scheme) || c.kind == "modified-equation";
	if (needs_scheme && (c.scheme.empty() || c.problem.empty()))
		throw ParseError("splitting experiments need \"scheme\" and \"problem\"");
	if (!needs_scheme && c.field.empty())
		throw ParseError("this experiment needs a polynomial \"field\"");
	if (needs_tableau && c.tableau.empty())
		throw ParseError("this experiment needs a \"tableau\"");
	if (c.kind != "convergence" && c.T <= 0)
		throw ParseError("tracking experiments need an interval T > 0");
	return c;
}

inline ExperimentConfig experiment_from_file(const std::string &path)
{
	return experiment_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

namespace detail {

inline std::vector<ConvergenceRow> run_convergence(const ExperimentConfig &c)
{
	if (c.method == "splitting")
	{
		auto scheme = scheme_from_json(read_json_file(c.scheme));
		auto problem = perturbed_problem_from_json(read_json_file(c.problem));
		Field full = [&problem](const State &x) { return problem.field(x); };
		if (c.T == 0)
			return convergence_table(c.steps, [&](double h) {
				return max_difference(splitting_step(scheme, problem, c.x0, h),
				                      reference_solution(full, c.x0, h).value);
			});
		State ref = reference_solution(full, c.x0, c.T).value;
		return convergence_table(c.steps, [&](double h) {
			return max_difference(splitting_integrate(scheme, problem, c.x0, h, step_count(c.T, h)), ref);
		});
	}

	auto f = polymap_from_json<double>(read_json_file(c.field));
	Field F = as_field(f);
	std::optional<RKTableau> tab;
	if (!c.tableau.empty())
		tab = tableau_from_json(read_json_file(c.tableau));
	// one step of the method under study
	std::function<State(const State &, double)> step;
	if (c.method == "rk")
		step = [&](const State &x, double h) { return rk_step(*tab, F, x, h); };
	else
	{
		// truncated B-series of the tableau weights, or of the exact flow
		BMap coeffs = tab ? elementary_weights(*tab, c.N) : exact_flow_bmap(c.N);
		step = [&, coeffs](const State &x, double h) { return bseries_eval(coeffs, f, x, h, c.N); };
	}
	if (c.T == 0)
		return convergence_table(
		    c.steps, [&](double h) { return max_difference(step(c.x0, h), reference_solution(F, c.x0, h).value); });
	State ref = reference_solution(F, c.x0, c.T).value;
	return convergence_table(c.steps, [&](double h) {
		State x = c.x0;
		for (std::size_t n = step_count(c.T, h); n > 0; --n)
			x = step(x, h);
		return max_difference(x, ref);
	});
}

/// Largest deviation at the grid times between a one-step map and the flow of
/// a field integrated with RK4 micro-steps.
inline double track(const std::function<State(const State &)> &step, const Field &modified, const State &x0,
                    double h, double T, std::size_t substeps)
{
	State x = x0, y = x0;
	double worst = 0;
	for (std::size_t n = step_count(T, h); n > 0; --n)
	{
		x = step(x);
		y = rk4_integrate(modified, y, h, substeps);
		worst = std::max(worst, max_difference(x, y));
	}
	return worst;
}

} // namespace detail

inline std::vector<ConvergenceRow> run_experiment(const ExperimentConfig &c)
{
	if (c.kind == "convergence")
		return detail::run_convergence(c);
	if (c.kind == "modified-equation")
	{
		auto tab = tableau_from_json(read_json_file(c.tableau));
		auto f = polymap_from_json<double>(read_json_file(c.field));
		Field F = as_field(f);
		BMap beta = log_star(elementary_weights(tab, c.N));
		return convergence_table(c.steps, [&](double h) {
			return detail::track([&](const State &x) { return rk_step(tab, F, x, h); },
			                     modified_bseries_field(beta, f, h, c.N), c.x0, h, c.T, c.substeps);
		});
	}
	auto scheme = scheme_from_json(read_json_file(c.scheme));
	auto problem = perturbed_problem_from_json(read_json_file(c.problem));
	return convergence_table(c.steps, [&](double h) {
		auto m = modified_system(scheme, problem.omega, h, c.N, problem.modes);
		return detail::track([&](const State &x) { return splitting_step(scheme, problem, x, h); },
		                     modified_ext_field(m, problem), c.x0, h, c.T, c.substeps);
	});
}

/// Whether the last observed rate lies in the expected band (true when no
/// band is configured).
inline bool rate_as_expected(const ExperimentConfig &c, const std::vector<ConvergenceRow> &rows)
{
	if (!c.expected_rate)
		return true;
	if (rows.size() < 2)
		return false;
	double r = rows.back().rate;
	return r >= c.expected_rate->first && r <= c.expected_rate->second;
}

} // namespace bseries

#endif // BSERIES_EXPERIMENTS_HPP
