#ifndef BSERIES_SCALAR_HPP
#define BSERIES_SCALAR_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace bseries {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using Complex = std::complex<double>;

template <class T> struct is_complex : std::false_type {};
template <class T> struct is_complex<std::complex<T>> : std::true_type {};
template <class T> inline constexpr bool is_complex_v = is_complex<T>::value;

template <class T> inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Parses "p/q", "p" or "-p/q" into an exact rational.
inline Rational parse_rational(std::string_view text)
{
	auto trim = [](std::string_view s) {
		while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
			s.remove_prefix(1);
		while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
			s.remove_suffix(1);
		return s;
	};
	auto parse_int = [](std::string_view s) {
		if (s.empty())
			throw std::invalid_argument("empty integer in rational literal");
		std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
		if (start == s.size())
			throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
		for (std::size_t i = start; i < s.size(); ++i)
			if (!std::isdigit(static_cast<unsigned char>(s[i])))
				throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
		// Boost reads a leading 0 as an octal prefix, so pass canonical digits
		std::string digits(s.substr(start));
		digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
		return Integer((s.front() == '-' ? "-" : "") + digits);
	};
	text = trim(text);
	auto slash = text.find('/');
	if (slash == std::string_view::npos)
		return Rational(parse_int(text));
	Integer num = parse_int(trim(text.substr(0, slash)));
	Integer den = parse_int(trim(text.substr(slash + 1)));
	if (den == 0)
		throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
	return Rational(num, den);
}

inline std::string to_string(const Rational &r) { return r.str(); }

inline double to_double(const Rational &r) { return r.convert_to<double>(); }

// Conversion into the scalar ring used by an evaluation. Specialized for
// floating types and for truncated series (see series.hpp).
template <class To> struct Lift
{
	static To from(const To &x) { return x; }
	template <class From> static To from(const From &x) { return To(x); }
};

template <> struct Lift<double>
{
	static double from(double x) { return x; }
	static double from(const Rational &r) { return to_double(r); }
	static double from(int x) { return x; }
};

template <> struct Lift<Complex>
{
	static Complex from(const Complex &x) { return x; }
	static Complex from(double x) { return {x, 0.0}; }
	static Complex from(int x) { return {double(x), 0.0}; }
	static Complex from(const Rational &r) { return {to_double(r), 0.0}; }
};

template <class To, class From> To lift(const From &x) { return Lift<To>::from(x); }

/// Size used for tolerance comparisons; exact scalars convert to double.
inline double magnitude(const Rational &r) { return std::fabs(to_double(r)); }
inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(const Complex &z) { return std::abs(z); }

/// Exact equality for rationals, relative closeness (floor 1) otherwise.
template <class T> bool nearly_equal(const T &a, const T &b, double tol)
{
	if constexpr (is_exact_v<T>)
		return a == b;
	else
	{
		double scale = std::max({1.0, magnitude(a), magnitude(b)});
		return magnitude(T(a - b)) <= tol * scale;
	}
}

inline Rational factorial(unsigned n)
{
	Integer r = 1;
	for (unsigned k = 2; k <= n; ++k)
		r *= k;
	return Rational(r);
}

} // namespace bseries

#endif // BSERIES_SCALAR_HPP
