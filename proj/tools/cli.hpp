#ifndef BSERIES_TOOLS_CLI_HPP
#define BSERIES_TOOLS_CLI_HPP

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <bseries/bseries.hpp>

namespace bseries::cli {

/// Exit codes: 0 success, 1 a check failed, 2 bad arguments or input.
enum Exit : int
{
	ok = 0,
	check_failed = 1,
	bad_input = 2
};

namespace detail {

struct Options
{
	std::size_t N = 4;
	std::vector<std::string> inputs;
	std::string output;
	std::string mode = "exact";
	double tol = 1e-10;
	std::vector<double> omega;
	double h = 0.1;
	double t = 1.0;
	std::string modes;
	std::string letters;
	std::string problem;
	std::optional<std::size_t> expect_order;
	bool conditions = false;
};

inline std::string format_rational(const Rational &r, const std::string &mode)
{
	if (mode == "exact")
		return to_string(r);
	std::ostringstream os;
	os << std::setprecision(17) << to_double(r);
	return os.str();
}

inline Json bmap_json(const BMap &m, const std::string &mode)
{
	if (mode == "exact")
		return to_json(m);
	Json out = Json::object();
	auto const &cat = m.catalog();
	for (std::size_t i = 0; i < cat.size(); ++i)
		out[cat.tree(i).empty() ? "[]" : cat.tree(i).to_string()] = to_double(m.at(i));
	return out;
}

inline const std::string &single_input(const Options &o)
{
	if (o.inputs.size() != 1)
		throw ParseError("this command takes exactly one --input file");
	return o.inputs[0];
}

/// Either a tableau (object with "A" and "b") or B-series coefficients.
inline BMap bmap_input(const std::string &path, std::size_t N)
{
	Json j = read_json_file(path);
	if (j.is_object() && j.contains("A"))
		return elementary_weights(tableau_from_json(j), N);
	return bmap_from_json(j, N);
}

/// "-1;1" or "1,0;0,1": letters separated by ';', vector entries by ','.
inline Alphabet parse_modes(const std::string &spec, std::size_t d)
{
	std::vector<std::vector<int>> ks;
	std::stringstream letters(spec);
	std::string letter;
	while (std::getline(letters, letter, ';'))
	{
		std::vector<int> k;
		std::stringstream entries(letter);
		std::string e;
		while (std::getline(entries, e, ','))
		{
			try
			{
				std::size_t used = 0;
				k.push_back(std::stoi(e, &used));
				if (used != e.size())
					throw std::invalid_argument(e);
			}
			catch (const std::exception &)
			{
				throw ParseError("bad mode entry '" + e + "' in --modes");
			}
		}
		if (k.size() != d)
			throw ParseError("mode '" + letter + "' does not have " + std::to_string(d) + " entries");
		ks.push_back(std::move(k));
	}
	try
	{
		return Alphabet::modes(std::move(ks));
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError(std::string("bad --modes: ") + e.what());
	}
}

/// ±e_j for each frequency.
inline Alphabet default_modes(std::size_t d)
{
	std::vector<std::vector<int>> ks;
	for (std::size_t j = 0; j < d; ++j)
		for (int s : {-1, 1})
		{
			std::vector<int> k(d, 0);
			k[j] = s;
			ks.push_back(k);
		}
	return Alphabet::modes(std::move(ks));
}

inline int cmd_trees(const Options &o, std::ostream &out)
{
	auto const &cat = tree_catalog(o.N);
	out << "tree\torder\tsigma\tfactorial\n";
	for (std::size_t i = 1; i < cat.size(); ++i)
		out << cat.tree(i).to_string() << '\t' << cat.order(i) << '\t' << cat.symmetry(i) << '\t' << cat.density(i)
		    << '\n';
	return ok;
}

inline int cmd_rk_order(const Options &o, std::ostream &out)
{
	auto t = tableau_from_json(read_json_file(single_input(o)));
	auto w = elementary_weights(t, o.N);
	if (o.conditions)
		for (auto const &c : order_conditions(o.N))
		{
			auto const &value = w[c.tree];
			out << c.tree.to_string() << "\tweight " << format_rational(value, o.mode) << "\trequired "
			    << format_rational(c.value, o.mode) << '\t' << (value == c.value ? "ok" : "FAIL") << '\n';
		}
	std::size_t p = order_of(w, o.N);
	out << "order " << p << (p == o.N ? " (at least; checked through " + std::to_string(o.N) + ")" : "") << '\n';
	if (o.expect_order && *o.expect_order != p)
		return check_failed;
	return ok;
}

inline int cmd_rk_symplectic(const Options &o, std::ostream &out)
{
	auto t = tableau_from_json(read_json_file(single_input(o)));
	bool tableau = is_symplectic_tableau(t);
	auto coeffs = is_symplectic_coeffs(elementary_weights(t, o.N), o.N);
	out << "tableau condition b_i a_ij + b_j a_ji = b_i b_j: " << (tableau ? "holds" : "fails") << '\n';
	out << "coefficient condition through grade " << o.N << ": " << (coeffs.holds ? "holds" : "fails");
	if (coeffs.witness)
		out << " (u = " << coeffs.witness->first.to_string() << ", v = " << coeffs.witness->second.to_string()
		    << ")";
	out << '\n';
	return tableau && coeffs.holds ? ok : check_failed;
}

inline int cmd_compose(const Options &o, std::ostream &out)
{
	if (o.inputs.size() != 2)
		throw ParseError("compose takes two --input files: the map applied first, then the second");
	auto gamma = bmap_input(o.inputs[0], o.N);
	auto delta = bmap_input(o.inputs[1], o.N);
	if (!gamma.is_group_like() || !delta.is_group_like())
		throw ParseError("compose needs group-like coefficients (value 1 on the empty tree)");
	out << bmap_json(compose(delta, gamma), o.mode).dump(2) << '\n';
	return ok;
}

inline int cmd_modified_equation(const Options &o, std::ostream &out)
{
	auto gamma = bmap_input(single_input(o), o.N);
	if (!gamma.is_group_like())
		throw ParseError("modified-equation needs group-like coefficients");
	auto beta = log_star(gamma);
	BMap normalized(o.N);
	auto const &cat = beta.catalog();
	for (std::size_t i = 1; i < cat.size(); ++i)
		normalized.at(i) = beta.at(i) / Rational(cat.symmetry(i));
	Json report{{"beta", bmap_json(beta, o.mode)}, {"beta_over_sigma", bmap_json(normalized, o.mode)}};
	out << report.dump(2) << '\n';
	return ok;
}

inline int cmd_words(const Options &o, std::ostream &out)
{
	if (!o.inputs.empty())
	{
		auto p = perturbed_problem_from_json(read_json_file(single_input(o)));
		auto c = flow_coeffs(p.omega, o.t, p.modes, o.N);
		bool group = is_group_element(c.coeffs, o.N, o.tol).holds;
		Json report = to_json(c);
		report["t"] = o.t;
		report["group_element"] = group;
		out << report.dump(2) << '\n';
		return group ? ok : check_failed;
	}
	if (o.letters.empty())
		throw ParseError("words needs --letters a,b,... or an --input perturbed problem");
	std::vector<std::string> names;
	std::stringstream ss(o.letters);
	std::string name;
	while (std::getline(ss, name, ','))
		names.push_back(name);
	Alphabet a;
	try
	{
		a = Alphabet::symbols(names);
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError(std::string("bad --letters: ") + e.what());
	}
	WMap<Rational> shape(a, o.N);
	for (std::size_t i = 1; i < shape.size(); ++i)
		out << shape.length(i) << '\t' << a.to_string(shape.word(i)) << '\n';
	return ok;
}

inline int cmd_splitting_analyze(const Options &o, std::ostream &out)
{
	auto s = scheme_from_json(read_json_file(single_input(o)));
	std::vector<double> omega = o.omega;
	std::optional<PerturbedProblem> problem;
	if (!o.problem.empty())
	{
		problem = perturbed_problem_from_json(read_json_file(o.problem));
		if (omega.empty())
			omega = problem->omega;
	}
	if (omega.empty())
		throw ParseError("splitting-analyze needs --omega or --problem");
	try
	{
		validate_frequencies(omega);
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError(e.what());
	}
	Alphabet modes = !o.modes.empty() ? parse_modes(o.modes, omega.size())
	                 : problem        ? problem->modes
	                                  : default_modes(omega.size());
	if (modes.mode_dim() != omega.size())
		throw ParseError("modes and --omega have different dimensions");

	auto coeffs = splitting_coeffs(s, omega, o.h, modes, o.N);
	auto oracle = splitting_coeffs_by_composition(s, omega, o.h, modes, o.N);
	auto resonances = detect_resonances(omega, o.h, o.N, modes);
	Json res = Json::array();
	for (auto const &r : resonances)
		res.push_back(to_json(r, modes));
	bool group = is_group_element(coeffs.coeffs, o.N, o.tol).holds;
	double oracle_diff = max_difference(coeffs.coeffs, oracle.coeffs);

	Json report{{"scheme", to_json(s)},
	            {"omega", omega},
	            {"h", o.h},
	            {"N", o.N},
	            {"modes", to_json(modes)},
	            {"coefficients", to_json(coeffs)},
	            {"resonances", res},
	            {"diagnostics", {{"group_element", group}, {"composition_oracle_difference", oracle_diff}}}};
	int code = group && oracle_diff <= o.tol && resonances.empty() ? ok : check_failed;
	try
	{
		auto m = modified_system(s, omega, o.h, o.N, modes);
		report["modified_system"] = to_json(m);
		bool lie = is_lie_element(m.beta, o.N, o.tol).holds;
		report["diagnostics"]["lie_element"] = lie;
		if (!lie)
			code = check_failed;
		else
		{
			auto back = exp_modified(omega, m.beta, o.h, o.N, std::max(o.tol, 1e-9));
			double diff = max_difference(back.coeffs, coeffs.coeffs);
			report["diagnostics"]["round_trip_difference"] = diff;
			if (diff > o.tol)
				code = check_failed;
		}
	}
	catch (const ResonanceError &e)
	{
		report["modified_system"] = nullptr;
		report["diagnostics"]["modified_system_error"] = e.what();
		code = check_failed;
	}
	out << report.dump(2) << '\n';
	return code;
}

inline int cmd_verify(const Options &o, std::ostream &out)
{
	auto cfg = experiment_from_file(single_input(o));
	auto rows = run_experiment(cfg);
	write_csv(out, rows);
	return rate_as_expected(cfg, rows) ? ok : check_failed;
}

} // namespace detail

/// Runs the command line `args` (without the program name), writing results
/// to `out` (or the --output file) and diagnostics to `err`.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
	CLI::App app{"Exact B-series, word series and splitting analysis", "bseries"};
	app.require_subcommand(1);
	detail::Options o;

	auto common = [&](CLI::App *sub, bool inputs) {
		sub->add_option("-N,--max-order", o.N, "Grade cap (tree order or word length)")->check(CLI::Range(1, 12));
		if (inputs)
			sub->add_option("-i,--input", o.inputs, "Input JSON file");
		sub->add_option("-o,--output", o.output, "Write results to this file instead of stdout");
		sub->add_option("--mode", o.mode, "Number output: exact rationals or floats")
		    ->check(CLI::IsMember({"exact", "float"}));
		sub->add_option("--tol", o.tol, "Tolerance for floating-point checks")->check(CLI::PositiveNumber);
	};

	auto *trees = app.add_subcommand("trees", "List rooted trees with σ(u) and u!");
	common(trees, false);
	auto *rk_order = app.add_subcommand("rk-order", "Order of a Runge-Kutta tableau by exact order conditions");
	common(rk_order, true);
	rk_order->add_option("--expect", o.expect_order, "Exit with status 1 unless the order equals this value");
	rk_order->add_flag("--conditions", o.conditions, "Print each order condition");
	auto *rk_symp = app.add_subcommand("rk-symplectic", "Symplecticness of a Runge-Kutta tableau");
	common(rk_symp, true);
	auto *compose = app.add_subcommand("compose", "Coefficients of the second map applied after the first");
	common(compose, true);
	auto *modified = app.add_subcommand("modified-equation", "Modified-equation coefficients (log of the map)");
	common(modified, true);
	auto *words = app.add_subcommand("words", "List words, or flow coefficients of a perturbed problem");
	common(words, true);
	words->add_option("--letters", o.letters, "Comma-separated letter names");
	words->add_option("--t", o.t, "Time for the flow coefficients");
	auto *split = app.add_subcommand("splitting-analyze", "Word coefficients, resonances and modified system");
	common(split, true);
	split->set_help_flag("--help", "Print this help message and exit");
	split->add_option("--omega", o.omega, "Frequencies (positive)")->delimiter(',');
	split->add_option("--h", o.h, "Step size");
	split->add_option("--modes", o.modes, "Letters such as \"-1;1\" or \"1,0;0,1\"");
	split->add_option("--problem", o.problem, "Perturbed problem JSON supplying frequencies and modes");
	auto *verify = app.add_subcommand("verify", "Run a convergence or tracking experiment and print CSV");
	common(verify, true);

	std::vector<const char *> argv{"bseries"};
	for (auto const &a : args)
		argv.push_back(a.c_str());
	try
	{
		app.parse(int(argv.size()), argv.data());
	}
	catch (const CLI::CallForHelp &e)
	{
		out << app.help();
		return ok;
	}
	catch (const CLI::ParseError &e)
	{
		err << "error: " << e.what() << "\n\n" << app.help();
		return bad_input;
	}

	std::ofstream file;
	if (!o.output.empty())
	{
		file.open(o.output);
		if (!file)
		{
			err << "error: cannot write '" << o.output << "'\n";
			return bad_input;
		}
	}
	std::ostream &dest = o.output.empty() ? out : file;
	try
	{
		auto *sub = app.get_subcommands().front();
		std::string name = sub->get_name();
		if (name == "trees")
			return detail::cmd_trees(o, dest);
		if (name == "rk-order")
			return detail::cmd_rk_order(o, dest);
		if (name == "rk-symplectic")
			return detail::cmd_rk_symplectic(o, dest);
		if (name == "compose")
			return detail::cmd_compose(o, dest);
		if (name == "modified-equation")
			return detail::cmd_modified_equation(o, dest);
		if (name == "words")
			return detail::cmd_words(o, dest);
		if (name == "splitting-analyze")
			return detail::cmd_splitting_analyze(o, dest);
		return detail::cmd_verify(o, dest);
	}
	catch (const ParseError &e)
	{
		err << "error: " << e.what() << '\n';
		return bad_input;
	}
	catch (const std::invalid_argument &e)
	{
		err << "error: " << e.what() << '\n';
		return bad_input;
	}
	catch (const std::exception &e)
	{
		err << "error: " << e.what() << '\n';
		return check_failed;
	}
}

} // namespace bseries::cli

#endif // BSERIES_TOOLS_CLI_HPP
