#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bseries/words.hpp"

using namespace bseries;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

const Complex I(0, 1);

Alphabet ab() { return Alphabet::symbols({"a", "b"}); }

WMap<Complex> random_complex_map(const Alphabet &alph, std::size_t cap, std::mt19937 &rng, bool unit)
{
	std::uniform_real_distribution<double> u(-1, 1);
	WMap<Complex> m(alph, cap);
	for (std::size_t i = 0; i < m.size(); ++i)
		m.at(i) = Complex(u(rng), u(rng));
	if (unit)
		m.at(0) = 1;
	return m;
}

WMap<Complex> letter(const Alphabet &alph, std::size_t cap, int a, Complex c = 1)
{
	WMap<Complex> m(alph, cap);
	m[Word{a}] = c;
	return m;
}

// Group element as a product of single-letter exponentials exp(c e_a).
WMap<Complex> random_group_element(const Alphabet &alph, std::size_t cap, std::mt19937 &rng)
{
	std::uniform_real_distribution<double> u(-1, 1);
	WMap<Complex> g = WMap<Complex>::unit(alph, cap);
	for (int rep = 0; rep < 3; ++rep)
		for (std::size_t a = 0; a < alph.size(); ++a)
		{
			Complex c(u(rng), u(rng)), power = 1;
			WMap<Complex> e = WMap<Complex>::unit(alph, cap);
			for (std::size_t n = 1; n <= cap; ++n)
			{
				power *= c / double(n);
				e[Word(n, int(a))] = power;
			}
			g = convolution(g, e);
		}
	return g;
}

WMap<Complex> random_lie_element(const Alphabet &alph, std::size_t cap, std::mt19937 &rng)
{
	std::uniform_real_distribution<double> u(-1, 1);
	std::vector<WMap<Complex>> pool;
	for (std::size_t a = 0; a < alph.size(); ++a)
		pool.push_back(letter(alph, cap, int(a)));
	std::size_t gens = pool.size();
	for (std::size_t level = 2; level <= cap && pool.size() < 30; ++level)
	{
		std::size_t n = pool.size();
		for (std::size_t p = 0; p < n; ++p)
			for (std::size_t g = 0; g < gens; ++g)
				pool.push_back(lie_bracket(pool[p], pool[g]));
	}
	WMap<Complex> beta(alph, cap);
	for (auto const &p : pool)
		beta += Complex(u(rng), u(rng)) * p;
	return beta;
}

// Nested iterated integrals by cumulative trapezoid quadrature on a grid.
WMap<Complex> quadrature_iterated_integrals(const std::vector<std::function<Complex(double)>> &lambda,
                                            const Alphabet &alph, double t, std::size_t cap, int steps)
{
	WMap<Complex> shape(alph, cap);
	double dt = t / steps;
	std::vector<std::vector<Complex>> values(shape.size(), std::vector<Complex>(steps + 1));
	std::fill(values[0].begin(), values[0].end(), Complex(1));
	for (std::size_t i = 1; i < shape.size(); ++i)
	{
		Word w = shape.word(i);
		int a = w.back();
		w.pop_back();
		auto const &prev = values[shape.index(w)];
		auto &cur = values[i];
		cur[0] = 0;
		for (int s = 1; s <= steps; ++s)
		{
			Complex left = lambda[std::size_t(a)]((s - 1) * dt) * prev[std::size_t(s - 1)];
			Complex right = lambda[std::size_t(a)](s * dt) * prev[std::size_t(s)];
			cur[std::size_t(s)] = cur[std::size_t(s - 1)] + 0.5 * dt * (left + right);
		}
	}
	WMap<Complex> r(alph, cap);
	for (std::size_t i = 0; i < r.size(); ++i)
		r.at(i) = values[i][std::size_t(steps)];
	return r;
}

} // namespace

TEST(Words, AlphabetsAndIndexing)
{
	auto alph = Alphabet::symbols({"a", "b", "c"});
	WMap<Rational> m(alph, 3);
	EXPECT_EQ(m.size(), 1u + 3 + 9 + 27);
	for (std::size_t i = 0; i < m.size(); ++i)
		EXPECT_EQ(m.index(m.word(i)), i);
	EXPECT_EQ(m.word(0), Word{});
	EXPECT_EQ(m.word(1), Word{0});
	EXPECT_EQ(m.length(13), 3u);
	EXPECT_THROW(m.index(Word{0, 0, 0, 0}), std::out_of_range);
	EXPECT_THROW(m.index(Word{3}), std::out_of_range);
	EXPECT_EQ(alph.to_string({2, 0}), "c.a");
	EXPECT_THROW(Alphabet::symbols({"a", "a"}), std::invalid_argument);

	auto modes = Alphabet::modes({{-1, 0}, {1, 2}});
	EXPECT_EQ(modes.name(1), "1,2");
	EXPECT_EQ(modes.mode_sum({0, 1, 1}), (std::vector<int>{1, 4}));
	EXPECT_THROW(Alphabet::modes({{1}, {1, 2}}), std::invalid_argument);
	EXPECT_THROW(alph.mode(0), std::logic_error);
}

TEST(Words, ShuffleProduct)
{
	auto s = shuffle({0}, {1});
	EXPECT_EQ(s, (std::map<Word, std::uint64_t>{{{0, 1}, 1}, {{1, 0}, 1}}));
	auto t = shuffle({0, 1}, {2});
	EXPECT_EQ(t, (std::map<Word, std::uint64_t>{{{0, 1, 2}, 1}, {{0, 2, 1}, 1}, {{2, 0, 1}, 1}}));
	EXPECT_EQ(shuffle({}, {1, 0}), (std::map<Word, std::uint64_t>{{{1, 0}, 1}}));
	EXPECT_EQ(shuffle({1, 0}, {}), (std::map<Word, std::uint64_t>{{{1, 0}, 1}}));
	// a ⧢ a = 2 aa
	EXPECT_EQ(shuffle({0}, {0}), (std::map<Word, std::uint64_t>{{{0, 0}, 2}}));
	// total multiplicity is the binomial coefficient
	std::uint64_t total = 0;
	for (auto const &[w, m] : shuffle({0, 1, 0}, {1, 1}))
		total += m;
	EXPECT_EQ(total, 10u);
}

TEST(Words, ConvolutionBasics)
{
	std::mt19937 rng(201);
	auto alph = ab();
	auto d = random_complex_map(alph, 4, rng, false);
	auto e = random_complex_map(alph, 4, rng, false);
	EXPECT_EQ(convolution(d, WMap<Complex>::unit(alph, 4)), d);
	EXPECT_EQ(convolution(WMap<Complex>::unit(alph, 4), d), d);
	auto de = convolution(d, e);
	EXPECT_EQ(de[Word{}], d[Word{}] * e[Word{}]);
	EXPECT_NEAR(std::abs(de[Word{1}] - (d[Word{}] * e[Word{1}] + d[Word{1}] * e[Word{}])), 0, 1e-15);
	EXPECT_THROW(convolution(d, WMap<Complex>(alph, 3)), std::invalid_argument);
	EXPECT_THROW(convolution(d, WMap<Complex>(Alphabet::symbols({"x", "y"}), 4)), std::invalid_argument);
}

TEST(Words, ConvolutionIsAssociativeNotCommutative)
{
	std::mt19937 rng(203);
	auto alph = ab();
	for (int trial = 0; trial < 5; ++trial)
	{
		auto a = random_complex_map(alph, 4, rng, false);
		auto b = random_complex_map(alph, 4, rng, false);
		auto c = random_complex_map(alph, 4, rng, false);
		EXPECT_TRUE(nearly_equal(convolution(convolution(a, b), c), convolution(a, convolution(b, c)), 1e-12));
	}
	// exact version
	WMap<Rational> x(alph, 3), y(alph, 3), z(alph, 3);
	for (std::size_t i = 0; i < x.size(); ++i)
	{
		x.at(i) = R(long(i) + 1, 3);
		y.at(i) = R(2 - long(i), 5);
		z.at(i) = R(long(i * i) % 7, 2);
	}
	EXPECT_EQ(convolution(convolution(x, y), z), convolution(x, convolution(y, z)));

	// witness: the single letters a and b do not commute
	auto la = letter(alph, 2, 0), lb = letter(alph, 2, 1);
	auto ab_ = convolution(la, lb), ba_ = convolution(lb, la);
	EXPECT_EQ(ab_[Word({0, 1})], Complex(1));
	EXPECT_EQ(ba_[Word({0, 1})], Complex(0));
}

TEST(Words, GroupElements)
{
	auto alph = ab();
	EXPECT_TRUE(is_group_element(WMap<Rational>::unit(alph, 4), 4));
	auto tau = taylor_coeffs(alph, R(3, 2), 5);
	EXPECT_TRUE(is_group_element(tau, 5));
	EXPECT_EQ(tau[Word({0, 1})], R(9, 8));
	EXPECT_EQ(tau[Word({1})] * tau[Word({0})], tau[Word({0, 1})] + tau[Word({1, 0})]);

	auto broken = tau;
	broken[Word({1, 0})] += 1;
	auto check = is_group_element(broken, 5);
	EXPECT_FALSE(check.holds);
	ASSERT_TRUE(check.witness.has_value());
	EXPECT_EQ(check.witness->first.size() + check.witness->second.size(), 2u);

	WMap<Rational> zero_empty = tau;
	zero_empty[Word{}] = 0;
	auto empty_check = is_group_element(zero_empty, 3);
	EXPECT_FALSE(empty_check.holds);
	EXPECT_EQ(empty_check.witness->first, Word{});
	EXPECT_THROW(is_group_element(tau, 6), std::invalid_argument);

	std::mt19937 rng(205);
	auto g = random_group_element(alph, 4, rng);
	EXPECT_TRUE(is_group_element(g, 4, 1e-12));
	EXPECT_TRUE(is_group_element(convolution(g, random_group_element(alph, 4, rng)), 4, 1e-12));
}

TEST(Words, LieElements)
{
	auto alph = ab();
	EXPECT_TRUE(is_lie_element(letter(alph, 4, 0, {2, 1}), 4));
	std::mt19937 rng(207);
	auto b1 = random_lie_element(alph, 4, rng), b2 = random_lie_element(alph, 4, rng);
	EXPECT_TRUE(is_lie_element(b1, 4, 1e-12));
	EXPECT_TRUE(is_lie_element(lie_bracket(b1, b2), 4, 1e-12));
	auto shifted = b1;
	shifted[Word{}] = 1;
	EXPECT_FALSE(is_lie_element(shifted, 4, 1e-12));
	auto word_only = WMap<Complex>(alph, 4);
	word_only[Word({0, 1})] = 1;
	EXPECT_FALSE(is_lie_element(word_only, 4, 1e-12));
}

TEST(Words, AntipodeInverse)
{
	auto alph = ab();
	EXPECT_EQ(antipode_inverse(WMap<Rational>::unit(alph, 4)), WMap<Rational>::unit(alph, 4));
	auto tau = taylor_coeffs(alph, R(2, 3), 4);
	EXPECT_EQ(antipode_inverse(tau), taylor_coeffs(alph, R(-2, 3), 4));
	EXPECT_EQ(convolution(tau, taylor_coeffs(alph, R(-2, 3), 4)), WMap<Rational>::unit(alph, 4));

	std::mt19937 rng(209);
	for (int trial = 0; trial < 5; ++trial)
	{
		auto g = random_group_element(alph, 4, rng);
		auto inv = antipode_inverse(g, 1e-12);
		EXPECT_TRUE(nearly_equal(convolution(g, inv), WMap<Complex>::unit(alph, 4), 1e-12));
		EXPECT_TRUE(nearly_equal(convolution(inv, g), WMap<Complex>::unit(alph, 4), 1e-12));
	}
	EXPECT_THROW(antipode_inverse(random_complex_map(alph, 3, rng, true), 1e-12), std::invalid_argument);
}

TEST(Words, LieBracketIdentities)
{
	std::mt19937 rng(211);
	auto alph = ab();
	for (int trial = 0; trial < 5; ++trial)
	{
		auto a = random_lie_element(alph, 4, rng), b = random_lie_element(alph, 4, rng),
		     c = random_lie_element(alph, 4, rng);
		auto zero = WMap<Complex>(alph, 4);
		EXPECT_TRUE(nearly_equal(lie_bracket(a, a), zero, 1e-12));
		EXPECT_TRUE(nearly_equal(lie_bracket(a, b), Complex(-1) * lie_bracket(b, a), 1e-12));
		auto jacobi = lie_bracket(lie_bracket(a, b), c) + lie_bracket(lie_bracket(b, c), a) +
		              lie_bracket(lie_bracket(c, a), b);
		EXPECT_TRUE(nearly_equal(jacobi, zero, 1e-12));
	}
}

TEST(Words, ExpPolyIntegration)
{
	std::vector<double> omega{1.3};
	// ∫₀ᵗ s² e^{iωs} ds checked against its derivative by central differences
	auto p = ExpPoly::term(omega, {1}, 2, 1.0);
	auto P = p.integral();
	EXPECT_NEAR(std::abs(P(0.0)), 0, 1e-15);
	for (double t : {0.3, 1.0, 2.5})
	{
		double eps = 1e-5;
		Complex d = (P(t + eps) - P(t - eps)) / (2 * eps);
		EXPECT_NEAR(std::abs(d - p(t)), 0, 1e-8);
	}
	// zero frequency raises the power
	auto q = ExpPoly::term(omega, {0}, 3, 2.0).integral();
	EXPECT_NEAR(std::abs(q(2.0) - Complex(8)), 0, 1e-14);
	// K·ω = 0 with K ≠ 0 counts as zero frequency
	auto r = ExpPoly::term({1.0, 1.0}, {1, -1}, 0, 1.0).integral();
	EXPECT_NEAR(std::abs(r(0.7) - Complex(0.7)), 0, 1e-15);
}

TEST(Words, IteratedIntegralsWithUnitForcing)
{
	auto alph = ab();
	auto alpha = iterated_integral_coeffs(LambdaSpec::constant(2), alph, 0.7, 4);
	for (std::size_t i = 0; i < alpha.size(); ++i)
	{
		auto n = alpha.length(i);
		EXPECT_NEAR(std::abs(alpha.at(i) - std::pow(0.7, double(n)) / to_double(factorial(unsigned(n)))), 0, 1e-15);
	}
}

TEST(Words, IteratedIntegralsWithOscillatoryForcing)
{
	auto alph = ab();
	double mu = 2.0, t = 0.9;
	LambdaSpec spec{{mu}, {{{1.0, 0, {0}}}, {{1.0, 0, {1}}}}}; // λ_a ≡ 1, λ_b = e^{iμt}
	auto alpha = iterated_integral_coeffs(spec, alph, t, 4);
	Complex e = std::exp(I * mu * t);
	EXPECT_NEAR(std::abs(alpha[Word{1}] - (e - 1.0) / (I * mu)), 0, 1e-14);
	// α_{ab}(t) = ∫₀ᵗ e^{iμs} s ds by parts
	Complex ab_value = t * e / (I * mu) - (e - 1.0) / ((I * mu) * (I * mu));
	EXPECT_NEAR(std::abs(alpha[Word({0, 1})] - ab_value), 0, 1e-14);
	Complex ba_value = ((e - 1.0) / (I * mu) - t) / (I * mu);
	EXPECT_NEAR(std::abs(alpha[Word({1, 0})] - ba_value), 0, 1e-14);

	// small μ approaches the unit-forcing value t
	LambdaSpec tiny{{1e-7}, {{{1.0, 0, {1}}}, {{1.0, 0, {1}}}}};
	EXPECT_NEAR(std::abs(iterated_integral_coeffs(tiny, alph, t, 1)[Word{0}] - t), 0, 1e-6);

	EXPECT_TRUE(is_group_element(alpha, 4, 1e-12));
}

TEST(Words, IteratedIntegralsMatchQuadrature)
{
	// confluent frequencies (μ and −μ) and a polynomial factor
	auto alph = Alphabet::symbols({"a", "b", "c"});
	double mu = 1.7;
	LambdaSpec spec{{mu},
	                {{{1.0, 0, {1}}}, {{1.0, 0, {-1}}}, {{Complex(0.5, -0.25), 1, {0}}, {Complex(1.0), 0, {2}}}}};
	std::vector<std::function<Complex(double)>> lambda{
	    [&](double s) { return std::exp(I * mu * s); }, [&](double s) { return std::exp(-I * mu * s); },
	    [&](double s) { return Complex(0.5, -0.25) * s + std::exp(2.0 * I * mu * s); }};
	double t = 1.3;
	auto exact = iterated_integral_coeffs(spec, alph, t, 3);
	auto approx = quadrature_iterated_integrals(lambda, alph, t, 3, 20000);
	EXPECT_LT(max_difference(exact, approx), 1e-7);
	EXPECT_TRUE(is_group_element(exact, 3, 1e-12));
}

TEST(Words, OscillatoryIteratedIntegralsAreGroupElements)
{
	auto modes = Alphabet::modes({{-1}, {0}, {1}, {2}});
	for (double t : {0.1, 1.0, 3.7})
	{
		auto alpha = iterated_integral_coeffs(LambdaSpec::oscillatory({1.4}, modes), modes, t, 4);
		EXPECT_TRUE(is_group_element(alpha, 4, 1e-12)) << "t=" << t;
	}
	EXPECT_THROW(LambdaSpec::oscillatory({1.0, 2.0}, modes), std::invalid_argument);
}

TEST(Words, NearlyCancellingFrequencies)
{
	// mode (1,−1) has frequency 3e-10; the values must approach the exactly
	// resonant limit, where the closed form raises powers of t instead
	auto modes = Alphabet::modes({{1, 0}, {0, 1}, {1, -1}});
	double t = 1.1;
	auto near = iterated_integral_coeffs(LambdaSpec::oscillatory({0.9, 0.9 + 3e-10}, modes), modes, t, 4);
	auto exact_limit = iterated_integrals(LambdaSpec::oscillatory({0.9, 0.9}, modes), modes, 4);
	WMap<Complex> limit(modes, 4);
	for (std::size_t i = 0; i < limit.size(); ++i)
		limit.at(i) = exact_limit[i](t);
	EXPECT_LT(max_difference(near, limit), 1e-8);
	EXPECT_TRUE(is_group_element(near, 4, 1e-13));
	// the matrix form agrees with the closed form away from cancellation
	auto spec = LambdaSpec::oscillatory({0.7, 1.9}, modes);
	auto closed = iterated_integrals(spec, modes, 4);
	auto values = iterated_integral_coeffs(spec, modes, t, 4);
	for (std::size_t i = 0; i < values.size(); ++i)
		EXPECT_LT(std::abs(values.at(i) - closed[i](t)), 1e-13) << modes.to_string(values.word(i));
}
