#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bseries/series.hpp"
#include "bseries/vectorfields.hpp"

using namespace bseries;

namespace {

using Vec = std::vector<Rational>;
using Poly = Polynomial<Rational>;
using Field = PolyMap<Rational>;

RootedTree T(std::vector<int> levels) { return RootedTree::from_levels(levels); }
Rational R(long p, long q = 1) { return Rational(p, q); }

Rational random_rational(std::mt19937 &rng, long span = 3)
{
	std::uniform_int_distribution<long> num(-span, span), den(1, 4);
	return Rational(num(rng), den(rng));
}

Poly random_poly(std::size_t D, int max_degree, int nterms, std::mt19937 &rng)
{
	std::uniform_int_distribution<int> var(0, int(D) - 1), deg(0, max_degree);
	Poly p(D);
	for (int t = 0; t < nterms; ++t)
	{
		Exponent e(D, 0);
		int d = deg(rng);
		for (int k = 0; k < d; ++k)
			++e[std::size_t(var(rng))];
		p.add_term(e, random_rational(rng));
	}
	return p;
}

Field random_field(std::size_t D, int max_degree, std::mt19937 &rng)
{
	Field f(D, D);
	for (std::size_t i = 0; i < D; ++i)
		f[i] = random_poly(D, max_degree, 4, rng);
	return f;
}

Vec random_point(std::size_t D, std::mt19937 &rng)
{
	Vec x;
	for (std::size_t i = 0; i < D; ++i)
		x.push_back(random_rational(rng));
	return x;
}

// Jacobian and Hessian assembled from symbolic partial derivatives.
std::vector<Vec> jacobian(const Field &f, const Vec &x)
{
	std::vector<Vec> J(f.dim(), Vec(f.nvars()));
	for (std::size_t i = 0; i < f.dim(); ++i)
		for (std::size_t j = 0; j < f.nvars(); ++j)
			J[i][j] = f[i].partial(j).evaluate(x);
	return J;
}

Vec matvec(const std::vector<Vec> &M, const Vec &v)
{
	Vec r(M.size(), Rational(0));
	for (std::size_t i = 0; i < M.size(); ++i)
		for (std::size_t j = 0; j < v.size(); ++j)
			r[i] += M[i][j] * v[j];
	return r;
}

Vec second_derivative(const Field &f, const Vec &x, const Vec &a, const Vec &b)
{
	Vec r(f.dim(), Rational(0));
	for (std::size_t i = 0; i < f.dim(); ++i)
		for (std::size_t j = 0; j < f.nvars(); ++j)
			for (std::size_t k = 0; k < f.nvars(); ++k)
				r[i] += f[i].partial(j).partial(k).evaluate(x) * a[j] * b[k];
	return r;
}

Field linear_field(const std::vector<Vec> &A)
{
	std::size_t D = A.size();
	Field f(D, D);
	for (std::size_t i = 0; i < D; ++i)
		for (std::size_t j = 0; j < D; ++j)
			f[i] += Poly::variable(D, j) * A[i][j];
	return f;
}

// Group-like word coefficients: a convolution of single-letter exponentials,
// each with coefficient cⁿ/n! on aⁿ.
WMap<Rational> random_group_word_map(const Alphabet &alph, std::size_t cap, std::mt19937 &rng)
{
	WMap<Rational> g = WMap<Rational>::unit(alph, cap);
	for (int rep = 0; rep < 3; ++rep)
		for (std::size_t a = 0; a < alph.size(); ++a)
		{
			WMap<Rational> e = WMap<Rational>::unit(alph, cap);
			Rational c = random_rational(rng), power = 1;
			for (std::size_t n = 1; n <= cap; ++n)
			{
				power *= c;
				e[Word(n, int(a))] = power / factorial(unsigned(n));
			}
			g = convolution(g, e);
		}
	return g;
}

WMap<Rational> letter(const Alphabet &alph, std::size_t cap, int a)
{
	WMap<Rational> m(alph, cap);
	m[Word{a}] = 1;
	return m;
}

// Random Lie element: combination of single letters and nested brackets.
WMap<Rational> random_lie_element(const Alphabet &alph, std::size_t cap, std::mt19937 &rng)
{
	std::vector<WMap<Rational>> gens;
	for (std::size_t a = 0; a < alph.size(); ++a)
		gens.push_back(letter(alph, cap, int(a)));
	std::vector<WMap<Rational>> pool = gens;
	for (std::size_t level = 2; level <= cap; ++level)
	{
		std::vector<WMap<Rational>> next;
		for (auto const &p : pool)
			for (auto const &g : gens)
				next.push_back(lie_bracket(p, g));
		pool.insert(pool.end(), next.begin(), next.end());
		if (pool.size() > 40)
			break;
	}
	WMap<Rational> beta(alph, cap);
	for (auto const &p : pool)
		beta += random_rational(rng) * p;
	return beta;
}

} // namespace

TEST(Polynomial, ArithmeticAndCanonicalForm)
{
	auto x = Poly::variable(2, 0), y = Poly::variable(2, 1);
	auto p = (x + y) * (x - y);
	EXPECT_EQ(p, x * x - y * y);
	EXPECT_EQ(p.terms().size(), 2u);
	EXPECT_TRUE((p - p).is_zero());
	EXPECT_EQ(p.degree(), 2);
	EXPECT_EQ(p.evaluate(Vec{R(3), R(1, 2)}), R(9) - R(1, 4));
	EXPECT_EQ(p.partial(0), R(2) * x);
	EXPECT_EQ(p.partial(1), R(-2) * y);
	EXPECT_THROW(p.partial(2), std::out_of_range);
	EXPECT_THROW(p.evaluate(Vec{R(1)}), std::invalid_argument);
	EXPECT_THROW(x + Poly::variable(3, 0), std::invalid_argument);
}

TEST(Polynomial, DerivativesMatchCentralDifferences)
{
	std::mt19937 rng(101);
	for (int trial = 0; trial < 10; ++trial)
	{
		auto f = random_field(3, 3, rng).cast<double>();
		std::vector<double> x{0.3, -0.7, 1.1}, v{0.5, 0.25, -1.0};
		double eps = 1e-5;
		std::vector<double> xp(3), xm(3);
		for (int k = 0; k < 3; ++k)
		{
			xp[k] = x[k] + eps * v[k];
			xm[k] = x[k] - eps * v[k];
		}
		auto fp = f.evaluate(xp), fm = f.evaluate(xm);
		auto d = f.derivative_apply(x, {v});
		for (int i = 0; i < 3; ++i)
		{
			double fd = (fp[i] - fm[i]) / (2 * eps);
			EXPECT_LE(std::abs(fd - d[i]), 1e-6 * std::max(1.0, std::abs(d[i])));
		}
	}
}

TEST(VectorFields, ElementaryDifferentials)
{
	std::mt19937 rng(103);
	auto f = random_field(2, 3, rng);
	auto x = random_point(2, rng);
	auto fx = f.evaluate(x);
	EXPECT_EQ(elementary_differential(f, RootedTree::leaf(), x), fx);

	// [1,2,3,2] ↦ f''(x)[f(x), f'(x) f(x)]
	auto J = jacobian(f, x);
	auto expected = second_derivative(f, x, fx, matvec(J, fx));
	EXPECT_EQ(elementary_differential(f, T({1, 2, 3, 2}), x), expected);
	EXPECT_EQ(elementary_differential(f, T({1, 2, 3}), x), matvec(J, matvec(J, fx)));

	auto lin = linear_field({{R(1), R(2)}, {R(-3), R(1, 2)}});
	EXPECT_EQ(elementary_differential(lin, T({1, 2, 2}), x), (Vec{R(0), R(0)}));
	EXPECT_THROW(elementary_differential(f, RootedTree(), x), std::invalid_argument);
	EXPECT_THROW(elementary_differential(f, RootedTree::leaf(), Vec{R(1)}), std::invalid_argument);
}

TEST(VectorFields, BSeriesEvaluationExamples)
{
	std::mt19937 rng(107);
	auto f = random_field(2, 2, rng);
	auto x = random_point(2, rng);
	Rational h(1, 3);
	EXPECT_EQ(bseries_eval(BMap::unit(4), f, x, h, 4), x);

	RKTableau euler{"euler", {{R(0)}}, {R(1)}};
	auto fx = f.evaluate(x);
	EXPECT_EQ(bseries_eval(elementary_weights(euler, 3), f, x, h, 1), (Vec{x[0] + h * fx[0], x[1] + h * fx[1]}));

	// scalar f(x) = x: only the tall trees contribute, giving the Taylor sum of e^h x
	Field id = Field::identity(1);
	Rational taylor = 0, power = 1;
	for (unsigned n = 0; n <= 4; ++n)
	{
		taylor += power / factorial(n);
		power *= h;
	}
	EXPECT_EQ(bseries_eval(exact_flow_bmap(4), id, Vec{R(2)}, h, 4), (Vec{R(2) * taylor}));
	EXPECT_THROW(bseries_eval(exact_flow_bmap(3), id, Vec{R(2)}, h, 4), std::invalid_argument);
}

TEST(VectorFields, CompositionOfSeriesMatchesCompositionOfMaps)
{
	using H = Truncated<Rational, 4>;
	std::mt19937 rng(109);
	for (int trial = 0; trial < 3; ++trial)
	{
		auto f = random_field(2, 3, rng);
		BMap delta = BMap::unit(4), gamma = BMap::unit(4);
		for (std::size_t i = 1; i < delta.size(); ++i)
		{
			delta.at(i) = random_rational(rng);
			gamma.at(i) = random_rational(rng);
		}
		auto x0 = random_point(2, rng);
		std::vector<H> x{H(x0[0]), H(x0[1])};
		H h = H::variable();
		auto inner = bseries_eval(gamma, f, x, h, 4);
		auto lhs = bseries_eval(delta, f, inner, h, 4);
		auto rhs = bseries_eval(compose(delta, gamma), f, x, h, 4);
		EXPECT_EQ(lhs, rhs);
	}
}

TEST(VectorFields, AffineEquivariance)
{
	using H = Truncated<Rational, 4>;
	std::mt19937 rng(113);
	auto f = random_field(2, 2, rng);
	std::vector<Vec> M{{R(2), R(1)}, {R(1), R(1)}}, Minv{{R(1), R(-1)}, {R(-1), R(2)}};
	Vec c{R(1, 2), R(-1)};
	// f̄(x̄) = M⁻¹ f(M x̄ + c), built by substituting affine polynomials
	std::vector<Poly> sub;
	for (std::size_t i = 0; i < 2; ++i)
	{
		Poly p = Poly::constant(2, c[i]);
		for (std::size_t j = 0; j < 2; ++j)
			p += Poly::variable(2, j) * M[i][j];
		sub.push_back(p);
	}
	Field fsub(2, 2);
	for (std::size_t i = 0; i < 2; ++i)
		for (auto const &[e, coef] : f[i].terms())
		{
			Poly term = Poly::constant(2, coef);
			for (std::size_t j = 0; j < 2; ++j)
				for (int k = 0; k < e[j]; ++k)
					term = term * sub[j];
			fsub[i] += term;
		}
	Field fbar(2, 2);
	for (std::size_t i = 0; i < 2; ++i)
		for (std::size_t j = 0; j < 2; ++j)
			fbar[i] += fsub[j] * Minv[i][j];

	BMap gamma = BMap::unit(4);
	for (std::size_t i = 1; i < gamma.size(); ++i)
		gamma.at(i) = random_rational(rng);
	auto x0 = random_point(2, rng);
	std::vector<H> x{H(x0[0]), H(x0[1])};
	std::vector<H> xbar(2, H(0));
	for (std::size_t i = 0; i < 2; ++i)
		for (std::size_t j = 0; j < 2; ++j)
			xbar[i] += H(Minv[i][j] * (x0[j] - c[j]));
	H h = H::variable();
	auto direct = bseries_eval(gamma, f, x, h, 4);
	auto mapped = bseries_eval(gamma, fbar, xbar, h, 4);
	for (std::size_t i = 0; i < 2; ++i)
	{
		H back(c[i]);
		for (std::size_t j = 0; j < 2; ++j)
			back += H(M[i][j]) * mapped[j];
		EXPECT_EQ(back, direct[i]);
	}
}

TEST(VectorFields, EulerModifiedFieldReproducesEulerStep)
{
	// The flow of the modified field, computed by Picard iteration in a
	// nested series (outer variable t, inner variable h), must equal x + h x².
	using H = Truncated<Rational, 4>;
	using TH = Truncated<H, 4>;
	RKTableau euler{"euler", {{R(0)}}, {R(1)}};
	auto beta = log_star(elementary_weights(euler, 4));
	Field f(1, 1);
	f[0].add_term({2}, Rational(1));
	Rational x0(3, 2);
	TH hh(H::variable());
	std::vector<TH> y{TH(H(x0))};
	for (int iter = 0; iter < 6; ++iter)
	{
		auto g = bseries_eval(beta, f, y, hh, 4); // h f̃(y(t))
		TH integral;
		for (int k = 0; k < 4; ++k)
			integral[k + 1] = g[0][k] * H(Rational(1, k + 1));
		y = {TH(H(x0)) + integral};
	}
	H at_one;
	for (int k = 0; k <= 4; ++k)
		at_one += y[0][k];
	H expected(x0);
	expected[1] = x0 * x0;
	EXPECT_EQ(at_one, expected);
}

TEST(VectorFields, WordBasisFunctions)
{
	std::mt19937 rng(127);
	std::vector<Field> fs{random_field(2, 2, rng), random_field(2, 3, rng), random_field(2, 2, rng)};
	auto x = random_point(2, rng);
	auto fa = fs[0].evaluate(x), fb = fs[1].evaluate(x), fc = fs[2].evaluate(x);
	EXPECT_EQ(word_basis(fs, Word{}, x), x);
	EXPECT_EQ(word_basis(fs, Word{0}, x), fa);
	// f_{ba} = f_a' f_b
	EXPECT_EQ(word_basis(fs, Word{1, 0}, x), matvec(jacobian(fs[0], x), fb));
	// f_{cba} = f_a''[f_b, f_c] + f_a' f_b' f_c
	auto expected = second_derivative(fs[0], x, fb, fc);
	auto tail = matvec(jacobian(fs[0], x), matvec(jacobian(fs[1], x), fc));
	for (std::size_t i = 0; i < 2; ++i)
		expected[i] += tail[i];
	EXPECT_EQ(word_basis(fs, Word{2, 1, 0}, x), expected);
	EXPECT_THROW(word_basis(fs, Word{3}, x), std::invalid_argument);
}

TEST(VectorFields, WordSeriesOfLinearFieldIsMatrixExponential)
{
	auto alph = Alphabet::symbols({"a"});
	std::vector<Vec> A{{R(0), R(1)}, {R(-2), R(1, 3)}};
	std::vector<Field> fs{linear_field(A)};
	Rational t(1, 2);
	Vec x{R(1), R(-1)};
	auto alpha = taylor_coeffs(alph, t, 5);
	// Σ tⁿ/n! Aⁿ x
	Vec expected = x, term = x;
	Rational power = 1;
	for (unsigned n = 1; n <= 5; ++n)
	{
		term = matvec(A, term);
		power *= t;
		for (std::size_t i = 0; i < 2; ++i)
			expected[i] += term[i] * power / factorial(n);
	}
	EXPECT_EQ(wordseries_eval(alpha, fs, x, 5), expected);
	EXPECT_EQ(wordseries_eval(WMap<Rational>::unit(alph, 3), fs, x, 3), x);
}

TEST(VectorFields, WordSeriesMatchesTaylorExpansionOfSumFlow)
{
	using H = Truncated<Rational, 3>;
	std::mt19937 rng(131);
	auto alph = Alphabet::symbols({"a", "b"});
	std::vector<Field> fs{random_field(2, 2, rng), random_field(2, 3, rng)};
	auto x0 = random_point(2, rng);
	std::vector<H> x{H(x0[0]), H(x0[1])};
	H t = H::variable();
	auto tau = taylor_coeffs(alph, t, 3);
	auto words = wordseries_eval(tau, fs, x, 3);
	// the B-series of the exact flow of f_a + f_b, expanded in t
	auto bseries = bseries_eval(exact_flow_bmap(3), fs[0] + fs[1], x, t, 3);
	EXPECT_EQ(words, bseries);

	// second-order Taylor polynomial computed directly
	using H2 = Truncated<Rational, 2>;
	std::vector<H2> x2{H2(x0[0]), H2(x0[1])};
	H2 t2 = H2::variable();
	auto sum = fs[0] + fs[1];
	auto v = sum.evaluate(x0);
	auto Jv = matvec(jacobian(sum, x0), v);
	auto w2 = wordseries_eval(taylor_coeffs(alph, t2, 2), fs, x2, 2);
	for (std::size_t i = 0; i < 2; ++i)
	{
		EXPECT_EQ(w2[i][0], x0[i]);
		EXPECT_EQ(w2[i][1], v[i]);
		EXPECT_EQ(w2[i][2], Jv[i] / 2);
	}
}

TEST(VectorFields, WordSeriesCompositionLaw)
{
	// fields scaled by ε so that word length is the ε-degree
	using E = Truncated<Rational, 3>;
	std::mt19937 rng(137);
	auto alph = Alphabet::symbols({"a", "b"});
	for (int trial = 0; trial < 3; ++trial)
	{
		std::vector<PolyMap<E>> fs;
		for (int a = 0; a < 2; ++a)
			fs.push_back(random_field(2, 2, rng).cast<E>() * E::variable());
		auto gamma = random_group_word_map(alph, 3, rng);
		WMap<Rational> delta(alph, 3);
		for (std::size_t i = 0; i < delta.size(); ++i)
			delta.at(i) = random_rational(rng);
		ASSERT_TRUE(is_group_element(gamma, 3));
		auto x0 = random_point(2, rng);
		std::vector<E> x{E(x0[0]), E(x0[1])};
		auto lhs = wordseries_eval(delta, fs, wordseries_eval(gamma, fs, x, 3), 3);
		auto rhs = wordseries_eval(convolution(gamma, delta), fs, x, 3);
		EXPECT_EQ(lhs, rhs);
	}
}

TEST(VectorFields, LieBracketOfCoefficientsIsJacobiBracketOfSeries)
{
	std::mt19937 rng(139);
	auto alph = Alphabet::symbols({"a", "b"});
	std::vector<Field> fs{random_field(2, 2, rng), random_field(2, 2, rng)};
	WordBasis<Rational> basis(fs);
	auto series = [&](const WMap<Rational> &m) {
		Field s(2, 2);
		for (std::size_t i = 1; i < m.size(); ++i)
			if (m.at(i) != 0)
				s += basis(m.word(i)) * m.at(i);
		return s;
	};
	auto a = letter(alph, 3, 0), b = letter(alph, 3, 1);
	auto beta = R(2) * a - R(1, 2) * b;
	auto beta2 = R(1, 3) * a + lie_bracket(a, b);
	EXPECT_EQ(series(lie_bracket(beta, beta2)), jacobi_bracket(series(beta), series(beta2)));
}

TEST(VectorFields, JacobiBracket)
{
	std::mt19937 rng(149);
	auto f = random_field(2, 3, rng), g = random_field(2, 3, rng), k = random_field(2, 3, rng);
	EXPECT_TRUE(jacobi_bracket(f, f).is_zero());
	EXPECT_EQ(jacobi_bracket(f, g), Rational(-1) * jacobi_bracket(g, f));
	EXPECT_EQ(jacobi_bracket(f + R(3) * g, k), jacobi_bracket(f, k) + R(3) * jacobi_bracket(g, k));

	std::vector<Vec> A{{R(1), R(2)}, {R(0), R(-1)}}, B{{R(0), R(1)}, {R(3), R(1, 2)}};
	std::vector<Vec> BA(2, Vec(2, Rational(0))), AB = BA;
	for (int i = 0; i < 2; ++i)
		for (int j = 0; j < 2; ++j)
			for (int l = 0; l < 2; ++l)
			{
				BA[i][j] += B[i][l] * A[l][j];
				AB[i][j] += A[i][l] * B[l][j];
			}
	std::vector<Vec> C(2, Vec(2));
	for (int i = 0; i < 2; ++i)
		for (int j = 0; j < 2; ++j)
			C[i][j] = BA[i][j] - AB[i][j];
	EXPECT_EQ(jacobi_bracket(linear_field(A), linear_field(B)), linear_field(C));
}

TEST(VectorFields, PoissonBracket)
{
	auto p = Poly::variable(2, 0), q = Poly::variable(2, 1);
	EXPECT_EQ(poisson_bracket(q, p), Poly::constant(2, R(-1)));
	EXPECT_EQ(poisson_bracket(p, q), Poly::constant(2, R(1)));
	EXPECT_THROW(poisson_bracket(Poly::variable(3, 0), Poly::variable(3, 1)), std::invalid_argument);

	std::mt19937 rng(151);
	for (int trial = 0; trial < 5; ++trial)
	{
		auto A = random_poly(4, 2, 5, rng), B = random_poly(4, 2, 5, rng), C = random_poly(4, 2, 5, rng);
		EXPECT_TRUE(poisson_bracket(A, A).is_zero());
		EXPECT_EQ(poisson_bracket(A, B), -poisson_bracket(B, A));
		auto jacobi = poisson_bracket(poisson_bracket(A, B), C) + poisson_bracket(poisson_bracket(B, C), A) +
		              poisson_bracket(poisson_bracket(C, A), B);
		EXPECT_TRUE(jacobi.is_zero());
		// the field of {A, B} is the Jacobi bracket of the fields
		EXPECT_EQ(hamiltonian_vector_field(poisson_bracket(A, B)),
		          jacobi_bracket(hamiltonian_vector_field(A), hamiltonian_vector_field(B)));
	}
}

TEST(VectorFields, HamiltonianVectorField)
{
	auto p = Poly::variable(2, 0), q = Poly::variable(2, 1);
	auto H = (p * p + q * q) * R(1, 2);
	Field rotation(2, 2);
	rotation[0] = -q;
	rotation[1] = p;
	EXPECT_EQ(hamiltonian_vector_field(H), rotation);
	EXPECT_TRUE(hamiltonian_vector_field(Poly::constant(2, R(5))).is_zero());
	std::mt19937 rng(157);
	auto A = random_poly(2, 3, 4, rng), B = random_poly(2, 3, 4, rng);
	EXPECT_EQ(hamiltonian_vector_field(A + B * R(2)),
	          hamiltonian_vector_field(A) + R(2) * hamiltonian_vector_field(B));
	EXPECT_THROW(hamiltonian_vector_field(Poly::variable(1, 0)), std::invalid_argument);
}

TEST(VectorFields, HamiltonianWords)
{
	std::mt19937 rng(163);
	std::vector<Poly> Hs{random_poly(2, 2, 3, rng), random_poly(2, 2, 3, rng), random_poly(2, 2, 3, rng)};
	EXPECT_EQ(hamiltonian_word(Hs, Word{1}), Hs[1]);
	EXPECT_EQ(hamiltonian_word(Hs, Word{0, 1}), poisson_bracket(Hs[0], Hs[1]) * R(1, 2));

	// {{H₁,H₂},H₃} expanded by hand from partial derivatives (p = x₁, q = x₂)
	auto br = [](const Poly &A, const Poly &B) {
		return A.partial(0) * B.partial(1) - A.partial(1) * B.partial(0);
	};
	EXPECT_EQ(hamiltonian_word(Hs, Word{0, 1, 2}), br(br(Hs[0], Hs[1]), Hs[2]) * R(1, 3));
	EXPECT_THROW(hamiltonian_word(Hs, Word{}), std::invalid_argument);
}

TEST(VectorFields, DynkinSpechtWeverExamples)
{
	std::mt19937 rng(167);
	auto alph = Alphabet::symbols({"a", "b"});
	std::vector<Field> fs{random_field(2, 2, rng), random_field(2, 3, rng)};
	auto x = random_point(2, rng);
	auto a = letter(alph, 4, 0), b = letter(alph, 4, 1);

	auto single = R(3) * a;
	auto fa = fs[0].evaluate(x);
	EXPECT_EQ(dsw_eval(single, fs, x, 4), (Vec{R(3) * fa[0], R(3) * fa[1]}));
	EXPECT_EQ(dsw_eval(lie_bracket(a, b), fs, x, 4), jacobi_bracket(fs[0], fs[1]).evaluate(x));
	EXPECT_EQ(dsw_eval(WMap<Rational>(alph, 4), fs, x, 4), (Vec{R(0), R(0)}));

	WMap<Rational> not_lie(alph, 4);
	not_lie[Word{0, 1}] = 1;
	EXPECT_THROW(dsw_eval(not_lie, fs, x, 4), std::invalid_argument);
}

TEST(VectorFields, DynkinSpechtWeverOnRandomLieElements)
{
	std::mt19937 rng(173);
	auto alph = Alphabet::symbols({"a", "b"});
	std::vector<Field> fs{random_field(2, 2, rng), random_field(2, 2, rng)};
	WordBasis<Rational> basis(fs);
	for (int trial = 0; trial < 20; ++trial)
	{
		auto beta = random_lie_element(alph, 4, rng);
		ASSERT_TRUE(is_lie_element(beta, 4));
		auto x = random_point(2, rng);
		EXPECT_EQ(dsw_eval(beta, basis, x, 4), wordseries_eval(beta, basis, x, 4));
	}
}

TEST(VectorFields, WordSeriesOfHamiltonianLettersIsHamiltonian)
{
	std::mt19937 rng(179);
	auto alph = Alphabet::symbols({"a", "b"});
	std::vector<Poly> Hs{random_poly(2, 3, 4, rng), random_poly(2, 3, 4, rng)};
	std::vector<Field> fs{hamiltonian_vector_field(Hs[0]), hamiltonian_vector_field(Hs[1])};
	WordBasis<Rational> basis(fs);
	for (int trial = 0; trial < 5; ++trial)
	{
		auto beta = random_lie_element(alph, 3, rng);
		Poly H(2);
		for (std::size_t i = 1; i < beta.size(); ++i)
			if (beta.at(i) != 0)
				H += hamiltonian_word(Hs, beta.word(i)) * beta.at(i);
		auto x = random_point(2, rng);
		EXPECT_EQ(wordseries_eval(beta, basis, x, 3), hamiltonian_vector_field(H).evaluate(x));
	}
}
