#ifndef BSERIES_SERIES_HPP
#define BSERIES_SERIES_HPP

#include <array>
#include <complex>
#include <ostream>

#include "scalar.hpp"

namespace bseries {

/// Power series in one formal variable, truncated after degree Order.
///
/// Used as a scalar ring: evaluating a B-series or word series at a point
/// whose coordinates are Truncated values expands the result in powers of
/// the step size (or of a perturbation size), which is how composition laws
/// are checked "through order N" without floating-point tolerances.
template <class T, int Order> class Truncated
{
	static_assert(Order >= 0);

  public:
	using value_type = T;
	static constexpr int order = Order;

	Truncated() { c_.fill(T(0)); }
	Truncated(const T &constant) : Truncated() { c_[0] = constant; }
	Truncated(int constant) : Truncated(lift<T>(constant)) {}

	/// The formal variable itself.
	static Truncated variable()
	{
		Truncated r;
		if constexpr (Order >= 1)
			r.c_[1] = lift<T>(1);
		return r;
	}

	const T &operator[](int k) const { return c_[k]; }
	T &operator[](int k) { return c_[k]; }

	Truncated &operator+=(const Truncated &o)
	{
		for (int k = 0; k <= Order; ++k)
			c_[k] += o.c_[k];
		return *this;
	}
	Truncated &operator-=(const Truncated &o)
	{
		for (int k = 0; k <= Order; ++k)
			c_[k] -= o.c_[k];
		return *this;
	}
	Truncated &operator*=(const Truncated &o)
	{
		*this = *this * o;
		return *this;
	}

	friend Truncated operator+(Truncated a, const Truncated &b) { return a += b; }
	friend Truncated operator-(Truncated a, const Truncated &b) { return a -= b; }
	friend Truncated operator-(const Truncated &a)
	{
		Truncated r;
		for (int k = 0; k <= Order; ++k)
			r.c_[k] = -a.c_[k];
		return r;
	}
	friend Truncated operator*(const Truncated &a, const Truncated &b)
	{
		Truncated r;
		for (int i = 0; i <= Order; ++i)
		{
			if (a.c_[i] == T(0))
				continue;
			for (int j = 0; i + j <= Order; ++j)
				r.c_[i + j] += a.c_[i] * b.c_[j];
		}
		return r;
	}

	friend bool operator==(const Truncated &a, const Truncated &b) { return a.c_ == b.c_; }
	friend bool operator!=(const Truncated &a, const Truncated &b) { return !(a == b); }

	friend std::ostream &operator<<(std::ostream &os, const Truncated &s)
	{
		os << "(";
		for (int k = 0; k <= Order; ++k)
			os << (k ? ", " : "") << s.c_[k];
		return os << ")";
	}

  private:
	std::array<T, Order + 1> c_;
};

template <class T, int Order> struct Lift<Truncated<T, Order>>
{
	static Truncated<T, Order> from(const Truncated<T, Order> &x) { return x; }
	template <class From> static Truncated<T, Order> from(const From &x)
	{
		return Truncated<T, Order>(lift<T>(x));
	}
};

template <class T, int Order> double magnitude(const Truncated<T, Order> &s)
{
	double m = 0;
	for (int k = 0; k <= Order; ++k)
		m = std::max(m, magnitude(s[k]));
	return m;
}

/// exp(i x) for complex scalars and for series over them.
inline Complex expi(const Complex &x) { return std::exp(Complex(0, 1) * x); }

template <class T, int Order> Truncated<T, Order> expi(const Truncated<T, Order> &x)
{
	// split off the constant term; the remainder is nilpotent of index Order+1
	Truncated<T, Order> d = x;
	d[0] = T(0);
	Truncated<T, Order> id = Truncated<T, Order>(lift<T>(Complex(0, 1))) * d;
	Truncated<T, Order> sum(1), power(1);
	for (int n = 1; n <= Order; ++n)
	{
		power = power * id;
		sum += power * Truncated<T, Order>(lift<T>(1.0 / to_double(factorial(n))));
	}
	return Truncated<T, Order>(expi(x[0])) * sum;
}

} // namespace bseries

#endif // BSERIES_SERIES_HPP
