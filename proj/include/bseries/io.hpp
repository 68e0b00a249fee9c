#ifndef BSERIES_IO_HPP
#define BSERIES_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "butcher.hpp"
#include "extended.hpp"
#include "polynomial.hpp"
#include "splitting.hpp"
#include "trees.hpp"
#include "words.hpp"

namespace bseries {

using Json = nlohmann::json;

/// Malformed or inconsistent input data.
class ParseError : public std::runtime_error
{
  public:
	using std::runtime_error::runtime_error;
};

inline Json read_json_file(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError("cannot open '" + path + "'");
	try
	{
		return Json::parse(in);
	}
	catch (const Json::parse_error &e)
	{
		throw ParseError("'" + path + "' is not valid JSON: " + e.what());
	}
	catch (const std::ios_base::failure &e)
	{
		throw ParseError("cannot read '" + path + "': " + e.what());
	}
}

namespace detail {

inline const Json &field(const Json &j, const char *key)
{
	if (!j.is_object() || !j.contains(key))
		throw ParseError(std::string("missing field \"") + key + "\"");
	return j.at(key);
}

/// "p/q", integer strings, and decimal strings such as "-0.125" are exact.
inline Rational rational_from_string(const std::string &s)
{
	auto dot = s.find('.');
	try
	{
		if (dot == std::string::npos)
			return parse_rational(s);
		std::string digits = s.substr(0, dot) + s.substr(dot + 1);
		if (digits.empty() || digits == "-" || digits == "+" || s.find('/') != std::string::npos)
			throw std::invalid_argument("bad decimal");
		Integer den = 1;
		for (std::size_t i = dot + 1; i < s.size(); ++i)
			den *= 10;
		return Rational(parse_rational(digits).convert_to<Integer>(), den);
	}
	catch (const std::exception &)
	{
		throw ParseError("'" + s + "' is not a rational number");
	}
}

inline Rational rational_from_json(const Json &j)
{
	if (j.is_number_integer())
		return Rational(j.get<long long>());
	if (j.is_string())
		return rational_from_string(j.get<std::string>());
	throw ParseError("expected an exact number (integer or string \"p/q\"), got " + j.dump());
}

inline double double_from_json(const Json &j)
{
	if (j.is_number())
		return j.get<double>();
	if (j.is_string())
		return to_double(rational_from_string(j.get<std::string>()));
	throw ParseError("expected a number, got " + j.dump());
}

inline Complex complex_from_json(const Json &j)
{
	if (j.is_array())
	{
		if (j.size() != 2)
			throw ParseError("complex numbers are written [re, im], got " + j.dump());
		return {double_from_json(j[0]), double_from_json(j[1])};
	}
	return {double_from_json(j), 0.0};
}

template <class T> T scalar_from_json(const Json &j)
{
	if constexpr (std::is_same_v<T, Rational>)
		return rational_from_json(j);
	else if constexpr (std::is_same_v<T, double>)
		return double_from_json(j);
	else
		return complex_from_json(j);
}

template <class T> Json scalar_to_json(const T &v)
{
	if constexpr (std::is_same_v<T, Rational>)
		return to_string(v);
	else if constexpr (std::is_same_v<T, double>)
		return v;
	else
		return Json::array({v.real(), v.imag()});
}

inline std::vector<double> doubles_from_json(const Json &j, const char *what)
{
	if (!j.is_array())
		throw ParseError(std::string(what) + " must be an array of numbers");
	std::vector<double> v;
	for (auto const &x : j)
		v.push_back(double_from_json(x));
	return v;
}

inline std::vector<int> ints_from_json(const Json &j, const char *what)
{
	if (!j.is_array())
		throw ParseError(std::string(what) + " must be an array of integers");
	std::vector<int> v;
	for (auto const &x : j)
	{
		if (!x.is_number_integer())
			throw ParseError(std::string(what) + " must contain integers, got " + x.dump());
		v.push_back(x.get<int>());
	}
	return v;
}

} // namespace detail

// ---- Butcher tableaux and B-series coefficients

inline RKTableau tableau_from_json(const Json &j)
{
	RKTableau t;
	t.name = j.value("name", "");
	auto const &A = detail::field(j, "A");
	auto const &b = detail::field(j, "b");
	if (!A.is_array() || !b.is_array())
		throw ParseError("tableau fields \"A\" and \"b\" must be arrays");
	for (auto const &x : b)
		t.b.push_back(detail::rational_from_json(x));
	for (auto const &row : A)
	{
		if (!row.is_array())
			throw ParseError("tableau rows must be arrays");
		std::vector<Rational> r;
		for (auto const &x : row)
			r.push_back(detail::rational_from_json(x));
		t.A.push_back(std::move(r));
	}
	try
	{
		t.validate();
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError(e.what());
	}
	return t;
}

inline Json to_json(const RKTableau &t)
{
	Json A = Json::array(), b = Json::array();
	for (auto const &row : t.A)
	{
		Json r = Json::array();
		for (auto const &x : row)
			r.push_back(to_string(x));
		A.push_back(r);
	}
	for (auto const &x : t.b)
		b.push_back(to_string(x));
	return {{"name", t.name}, {"A", A}, {"b", b}};
}

inline RootedTree tree_from_key(const std::string &key)
{
	Json j;
	try
	{
		j = Json::parse(key);
	}
	catch (const Json::parse_error &)
	{
		throw ParseError("tree key '" + key + "' is not a level sequence");
	}
	auto levels = detail::ints_from_json(j, "tree key");
	if (levels.empty())
		return RootedTree();
	try
	{
		return RootedTree::from_levels(levels);
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError("tree key '" + key + "': " + e.what());
	}
}

/// {"level sequence": "p/q", ...} in catalog order, "[]" for the empty tree.
inline Json to_json(const BMap &m)
{
	Json out = Json::object();
	auto const &cat = m.catalog();
	for (std::size_t i = 0; i < cat.size(); ++i)
		out[cat.tree(i).empty() ? "[]" : cat.tree(i).to_string()] = to_string(m.at(i));
	return out;
}

/// Missing trees are zero; trees beyond the cap are rejected.
inline BMap bmap_from_json(const Json &j, std::size_t cap)
{
	if (!j.is_object())
		throw ParseError("B-series coefficients must be a JSON object");
	BMap m(cap);
	for (auto const &[key, value] : j.items())
	{
		auto t = tree_from_key(key);
		if (t.order() > cap)
			throw ParseError("tree " + key + " exceeds the grade cap " + std::to_string(cap));
		m.at(m.catalog().index(t)) = detail::rational_from_json(value);
	}
	return m;
}

// ---- polynomial maps

template <class T> PolyMap<T> polymap_from_json(const Json &j)
{
	auto const &dim = detail::field(j, "dim");
	if (!dim.is_number_integer() || dim.get<long long>() < 0)
		throw ParseError("\"dim\" must be a non-negative integer");
	std::size_t n = dim.get<std::size_t>();
	auto const &comps = detail::field(j, "components");
	if (!comps.is_array())
		throw ParseError("\"components\" must be an array");
	std::vector<Polynomial<T>> polys;
	for (auto const &c : comps)
	{
		if (!c.is_array())
			throw ParseError("each component is an array of terms");
		Polynomial<T> p(n);
		for (auto const &term : c)
		{
			auto e = detail::ints_from_json(detail::field(term, "exps"), "\"exps\"");
			try
			{
				p.add_term(e, detail::scalar_from_json<T>(detail::field(term, "coeff")));
			}
			catch (const std::invalid_argument &err)
			{
				throw ParseError(std::string("bad polynomial term: ") + err.what());
			}
		}
		polys.push_back(std::move(p));
	}
	PolyMap<T> m(n, polys.size());
	for (std::size_t i = 0; i < polys.size(); ++i)
		m[i] = std::move(polys[i]);
	return m;
}

template <class T> Json to_json(const PolyMap<T> &m)
{
	Json comps = Json::array();
	for (auto const &p : m.components())
	{
		Json terms = Json::array();
		for (auto const &[e, c] : p.terms())
			terms.push_back({{"coeff", detail::scalar_to_json(c)}, {"exps", e}});
		comps.push_back(terms);
	}
	return {{"dim", m.nvars()}, {"components", comps}};
}

// ---- word series

inline Alphabet alphabet_from_json(const Json &j)
{
	if (!j.is_array() || j.empty())
		throw ParseError("\"alphabet\" must be a nonempty array");
	try
	{
		if (j[0].is_array())
		{
			std::vector<std::vector<int>> ks;
			for (auto const &k : j)
				ks.push_back(detail::ints_from_json(k, "mode"));
			return Alphabet::modes(std::move(ks));
		}
		std::vector<std::string> names;
		for (auto const &s : j)
		{
			if (!s.is_string())
				throw ParseError("letters must be strings or integer arrays");
			names.push_back(s.get<std::string>());
		}
		return Alphabet::symbols(std::move(names));
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError(std::string("bad alphabet: ") + e.what());
	}
}

inline Json to_json(const Alphabet &a)
{
	Json out = Json::array();
	if (a.has_modes())
		for (auto const &k : a.modes())
			out.push_back(k);
	else
		for (auto const &n : a.names())
			out.push_back(n);
	return out;
}

inline Word word_from_key(const Alphabet &a, const std::string &key)
{
	Word w;
	if (key.empty())
		return w;
	std::size_t start = 0;
	for (;;)
	{
		auto dot = key.find('.', start);
		auto name = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
		try
		{
			w.push_back(a.index_of(name));
		}
		catch (const std::invalid_argument &)
		{
			throw ParseError("letter '" + name + "' in word '" + key + "' is not in the alphabet");
		}
		if (dot == std::string::npos)
			return w;
		start = dot + 1;
	}
}

template <class C> Json to_json(const WMap<C> &m)
{
	Json coeffs = Json::object();
	for (std::size_t i = 0; i < m.size(); ++i)
		if (m.at(i) != C(0))
			coeffs[m.alphabet().to_string(m.word(i))] = detail::scalar_to_json(m.at(i));
	return {{"alphabet", to_json(m.alphabet())}, {"cap", m.cap()}, {"coeffs", coeffs}};
}

inline WMap<Complex> wmap_from_json(const Json &j)
{
	auto alphabet = alphabet_from_json(detail::field(j, "alphabet"));
	auto const &cap = detail::field(j, "cap");
	if (!cap.is_number_integer() || cap.get<long long>() < 0)
		throw ParseError("\"cap\" must be a non-negative integer");
	WMap<Complex> m(alphabet, cap.get<std::size_t>());
	for (auto const &[key, value] : detail::field(j, "coeffs").items())
	{
		auto w = word_from_key(alphabet, key);
		if (w.size() > m.cap())
			throw ParseError("word '" + key + "' is longer than the cap");
		m.set(w, detail::complex_from_json(value));
	}
	return m;
}

inline Json to_json(const ExtCoeffs &c)
{
	Json shift = Json::array();
	for (auto const &v : c.shift)
		shift.push_back(detail::scalar_to_json(v));
	return {{"shift", shift}, {"word_coeffs", to_json(c.coeffs)}};
}

// ---- perturbed problems and splitting schemes

inline PerturbedProblem perturbed_problem_from_json(const Json &j)
{
	PerturbedProblem p;
	auto const &d = detail::field(j, "d");
	if (!d.is_number_integer() || d.get<long long>() < 1)
		throw ParseError("\"d\" must be a positive integer");
	p.omega = detail::doubles_from_json(detail::field(j, "omega"), "\"omega\"");
	if (p.omega.size() != d.get<std::size_t>())
		throw ParseError("\"omega\" must have d entries");
	auto const &modes = detail::field(j, "modes");
	if (!modes.is_array() || modes.empty())
		throw ParseError("\"modes\" must be a nonempty array");
	std::vector<std::vector<int>> ks;
	for (auto const &m : modes)
	{
		ks.push_back(detail::ints_from_json(detail::field(m, "k"), "\"k\""));
		if (ks.back().size() != p.omega.size())
			throw ParseError("mode vectors must have d entries");
		p.fhat.push_back(polymap_from_json<Complex>(detail::field(m, "fhat")));
	}
	try
	{
		p.modes = Alphabet::modes(std::move(ks));
		p.validate();
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError(std::string("bad perturbed problem: ") + e.what());
	}
	return p;
}

inline Json to_json(const PerturbedProblem &p)
{
	Json modes = Json::array();
	for (std::size_t a = 0; a < p.modes.size(); ++a)
		modes.push_back({{"k", p.modes.mode(int(a))}, {"fhat", to_json(p.fhat[a])}});
	return {{"d", p.d()}, {"omega", p.omega}, {"modes", modes}};
}

inline SplittingScheme scheme_from_json(const Json &j)
{
	SplittingScheme s;
	s.name = j.value("name", "");
	s.a = detail::doubles_from_json(detail::field(j, "a"), "\"a\"");
	s.b = detail::doubles_from_json(detail::field(j, "b"), "\"b\"");
	try
	{
		s.validate();
	}
	catch (const std::invalid_argument &e)
	{
		throw ParseError(e.what());
	}
	return s;
}

inline Json to_json(const SplittingScheme &s) { return {{"name", s.name}, {"a", s.a}, {"b", s.b}}; }

inline Json to_json(const Resonance &r, const Alphabet &modes)
{
	Json letters = Json::array();
	for (int a : r.letters)
		letters.push_back(modes.mode(a));
	return {{"letters", letters}, {"j", r.j}};
}

inline Json to_json(const ModifiedSystem &m)
{
	return {{"omega", m.omega}, {"h", m.h}, {"n", m.n}, {"beta", to_json(m.beta)}, {"warnings", m.warnings}};
}

} // namespace bseries

#endif // BSERIES_IO_HPP
