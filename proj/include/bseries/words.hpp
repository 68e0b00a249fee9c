#ifndef BSERIES_WORDS_HPP
#define BSERIES_WORDS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exppoly.hpp"
#include "scalar.hpp"

namespace bseries {

/// A word is a sequence of letter indices into an Alphabet; ∅ is the empty
/// vector.
using Word = std::vector<int>;

/// Finite alphabet of abstract symbols or of integer-vector modes k ∈ ℤ^d.
class Alphabet
{
  public:
	Alphabet() = default;

	static Alphabet symbols(std::vector<std::string> names)
	{
		Alphabet a;
		a.names_ = std::move(names);
		a.check_unique();
		return a;
	}

	static Alphabet modes(std::vector<std::vector<int>> ks)
	{
		if (ks.empty())
			throw std::invalid_argument("mode alphabet needs at least one mode");
		Alphabet a;
		a.dim_ = ks[0].size();
		for (auto const &k : ks)
		{
			if (k.size() != a.dim_ || k.empty())
				throw std::invalid_argument("modes must be nonempty integer vectors of one dimension");
			a.names_.push_back(mode_name(k));
		}
		a.modes_ = std::move(ks);
		a.check_unique();
		return a;
	}

	static std::string mode_name(const std::vector<int> &k)
	{
		std::string s;
		for (std::size_t j = 0; j < k.size(); ++j)
			s += (j ? "," : "") + std::to_string(k[j]);
		return s;
	}

	std::size_t size() const { return names_.size(); }
	bool has_modes() const { return !modes_.empty(); }
	std::size_t mode_dim() const { return dim_; }
	const std::string &name(int i) const { return names_.at(std::size_t(i)); }
	const std::vector<std::string> &names() const { return names_; }

	const std::vector<int> &mode(int i) const
	{
		if (!has_modes())
			throw std::logic_error("symbolic alphabet has no integer modes");
		return modes_.at(std::size_t(i));
	}
	const std::vector<std::vector<int>> &modes() const { return modes_; }

	int index_of(const std::string &name) const
	{
		auto it = std::find(names_.begin(), names_.end(), name);
		if (it == names_.end())
			throw std::invalid_argument("letter '" + name + "' is not in the alphabet");
		return int(it - names_.begin());
	}

	/// Sum k₁+⋯+kₙ of the modes of a word.
	std::vector<int> mode_sum(const Word &w) const
	{
		std::vector<int> s(dim_, 0);
		for (int l : w)
		{
			auto const &k = mode(l);
			for (std::size_t j = 0; j < dim_; ++j)
				s[j] += k[j];
		}
		return s;
	}

	std::string to_string(const Word &w) const
	{
		std::string s;
		for (std::size_t i = 0; i < w.size(); ++i)
			s += (i ? "." : "") + name(w[i]);
		return s;
	}

	friend bool operator==(const Alphabet &a, const Alphabet &b)
	{
		return a.names_ == b.names_ && a.modes_ == b.modes_;
	}
	friend bool operator!=(const Alphabet &a, const Alphabet &b) { return !(a == b); }

  private:
	void check_unique() const
	{
		if (names_.empty())
			throw std::invalid_argument("alphabet must not be empty");
		auto sorted = names_;
		std::sort(sorted.begin(), sorted.end());
		if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
			throw std::invalid_argument("alphabet has repeated letters");
	}

	std::vector<std::string> names_;
	std::vector<std::vector<int>> modes_;
	std::size_t dim_ = 0;
};

/// Dense coefficients δ_w for every word of length ≤ cap over an alphabet.
///
/// Words are stored by length, then lexicographically by letter index. C is
/// Complex for oscillatory work and Rational for exact identities.
template <class C> class WMap
{
  public:
	using value_type = C;

	WMap(Alphabet alphabet, std::size_t cap)
	    : alpha_(std::make_shared<const Alphabet>(std::move(alphabet))), cap_(cap)
	{
		std::size_t m = alpha_->size(), count = 1, total = 0;
		for (std::size_t n = 0; n <= cap; ++n)
		{
			offset_.push_back(total);
			total += count;
			count *= m;
		}
		offset_.push_back(total);
		c_.assign(total, lift<C>(0));
	}

	static WMap unit(Alphabet alphabet, std::size_t cap)
	{
		WMap w(std::move(alphabet), cap);
		w.c_[0] = lift<C>(1);
		return w;
	}

	const Alphabet &alphabet() const { return *alpha_; }
	std::size_t cap() const { return cap_; }
	std::size_t size() const { return c_.size(); }

	/// Index range [first, last) of the words with exactly n letters.
	std::pair<std::size_t, std::size_t> grade(std::size_t n) const
	{
		return {offset_.at(n), offset_.at(n + 1)};
	}

	std::size_t index(const Word &w) const
	{
		if (w.size() > cap_)
			throw std::out_of_range("word longer than the cap " + std::to_string(cap_));
		std::size_t m = alpha_->size(), r = 0;
		for (int l : w)
		{
			if (l < 0 || std::size_t(l) >= m)
				throw std::out_of_range("letter index " + std::to_string(l) + " outside the alphabet");
			r = r * m + std::size_t(l);
		}
		return offset_[w.size()] + r;
	}

	Word word(std::size_t i) const
	{
		std::size_t n = 0;
		while (offset_[n + 1] <= i)
			++n;
		std::size_t r = i - offset_[n], m = alpha_->size();
		Word w(n);
		for (std::size_t k = n; k-- > 0;)
		{
			w[k] = int(r % m);
			r /= m;
		}
		return w;
	}

	std::size_t length(std::size_t i) const
	{
		std::size_t n = 0;
		while (offset_[n + 1] <= i)
			++n;
		return n;
	}

	const C &operator[](const Word &w) const { return c_[index(w)]; }
	C &operator[](const Word &w) { return c_[index(w)]; }
	const C &at(std::size_t i) const { return c_.at(i); }
	C &at(std::size_t i) { return c_.at(i); }
	void set(const Word &w, const C &value) { c_[index(w)] = value; }
	const std::vector<C> &values() const { return c_; }

	/// Same coefficients on words of length ≤ cap.
	WMap truncated(std::size_t cap) const
	{
		if (cap > cap_)
			throw std::invalid_argument("cannot extend a WMap beyond its cap");
		WMap r(*alpha_, cap);
		std::copy(c_.begin(), c_.begin() + std::ptrdiff_t(r.size()), r.c_.begin());
		return r;
	}

	template <class D> WMap<D> cast() const
	{
		WMap<D> r(*alpha_, cap_);
		for (std::size_t i = 0; i < size(); ++i)
			r.at(i) = lift<D>(c_[i]);
		return r;
	}

	WMap &operator+=(const WMap &o)
	{
		require_compatible(o);
		for (std::size_t i = 0; i < size(); ++i)
			c_[i] += o.c_[i];
		return *this;
	}
	WMap &operator-=(const WMap &o)
	{
		require_compatible(o);
		for (std::size_t i = 0; i < size(); ++i)
			c_[i] -= o.c_[i];
		return *this;
	}
	friend WMap operator+(WMap a, const WMap &b) { return a += b; }
	friend WMap operator-(WMap a, const WMap &b) { return a -= b; }
	friend WMap operator*(const C &s, WMap a)
	{
		for (auto &c : a.c_)
			c = s * c;
		return a;
	}

	friend bool operator==(const WMap &a, const WMap &b)
	{
		return a.cap_ == b.cap_ && *a.alpha_ == *b.alpha_ && a.c_ == b.c_;
	}

	void require_compatible(const WMap &o) const
	{
		if (cap_ != o.cap_)
			throw std::invalid_argument("WMaps have different caps");
		if (alpha_ != o.alpha_ && *alpha_ != *o.alpha_)
			throw std::invalid_argument("WMaps are over different alphabets");
	}

  private:
	std::shared_ptr<const Alphabet> alpha_;
	std::size_t cap_;
	std::vector<std::size_t> offset_;
	std::vector<C> c_;
};

/// Largest coefficient difference, for tolerance reports.
template <class C> double max_difference(const WMap<C> &a, const WMap<C> &b)
{
	a.require_compatible(b);
	double m = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		m = std::max(m, magnitude(C(a.at(i) - b.at(i))));
	return m;
}

/// Coefficientwise closeness: exact for rationals, relative with floor 1 otherwise.
template <class C> bool nearly_equal(const WMap<C> &a, const WMap<C> &b, double tol)
{
	a.require_compatible(b);
	for (std::size_t i = 0; i < a.size(); ++i)
		if (!nearly_equal(a.at(i), b.at(i), tol))
			return false;
	return true;
}

/// All order-preserving interleavings of w and v, with multiplicity.
inline std::map<Word, std::uint64_t> shuffle(const Word &w, const Word &v)
{
	std::map<Word, std::uint64_t> out;
	Word acc;
	acc.reserve(w.size() + v.size());
	auto rec = [&](auto &self, std::size_t i, std::size_t j) -> void {
		if (i == w.size() && j == v.size())
		{
			++out[acc];
			return;
		}
		if (i < w.size())
		{
			acc.push_back(w[i]);
			self(self, i + 1, j);
			acc.pop_back();
		}
		if (j < v.size())
		{
			acc.push_back(v[j]);
			self(self, i, j + 1);
			acc.pop_back();
		}
	};
	rec(rec, 0, 0);
	return out;
}

/// (δ⋆δ′)_w = Σ over splittings w = w₁w₂ of δ_{w₁} δ′_{w₂}.
template <class C> WMap<C> convolution(const WMap<C> &a, const WMap<C> &b)
{
	a.require_compatible(b);
	WMap<C> r(a.alphabet(), a.cap());
	for (std::size_t i = 0; i < r.size(); ++i)
	{
		Word w = r.word(i);
		C sum = lift<C>(0);
		for (std::size_t j = 0; j <= w.size(); ++j)
		{
			Word prefix(w.begin(), w.begin() + std::ptrdiff_t(j));
			Word suffix(w.begin() + std::ptrdiff_t(j), w.end());
			sum += a[prefix] * b[suffix];
		}
		r.at(i) = sum;
	}
	return r;
}

/// β⋆β′ − β′⋆β.
template <class C> WMap<C> lie_bracket(const WMap<C> &a, const WMap<C> &b)
{
	return convolution(a, b) - convolution(b, a);
}

/// Outcome of a shuffle-relation check; `witness` is the first failing pair
/// (w, w′), or (∅, ∅) when the empty-word condition fails.
struct ShuffleCheck
{
	bool holds = true;
	std::optional<std::pair<Word, Word>> witness;

	explicit operator bool() const { return holds; }
};

namespace detail {

template <class C, class Relation>
ShuffleCheck check_shuffles(const WMap<C> &m, std::size_t max_len, Relation relation)
{
	if (max_len > m.cap())
		throw std::invalid_argument("shuffle check beyond the WMap cap");
	for (std::size_t i = 1; i < m.size(); ++i)
		for (std::size_t j = 1; j < m.size(); ++j)
		{
			if (m.length(i) + m.length(j) > max_len)
				continue;
			Word w = m.word(i), v = m.word(j);
			C sum = lift<C>(0);
			for (auto const &[s, mult] : shuffle(w, v))
				sum += lift<C>(int(mult)) * m[s];
			if (!relation(m.at(i), m.at(j), sum))
				return {false, std::make_pair(w, v)};
		}
	return {};
}

} // namespace detail

/// γ_∅ = 1 and γ_w γ_{w′} = Σ γ_{wⱼ} over w ⧢ w′ for |w|+|w′| ≤ max_len.
template <class C> ShuffleCheck is_group_element(const WMap<C> &g, std::size_t max_len, double tol = 0)
{
	if (!nearly_equal(g.at(0), lift<C>(1), tol))
		return {false, std::make_pair(Word{}, Word{})};
	return detail::check_shuffles(
	    g, max_len, [tol](const C &a, const C &b, const C &sum) { return nearly_equal(C(a * b), sum, tol); });
}

/// β_∅ = 0 and Σ β_{wⱼ} = 0 over w ⧢ w′ for nonempty w, w′ with |w|+|w′| ≤ max_len.
template <class C> ShuffleCheck is_lie_element(const WMap<C> &b, std::size_t max_len, double tol = 0)
{
	if (!nearly_equal(b.at(0), lift<C>(0), tol))
		return {false, std::make_pair(Word{}, Word{})};
	return detail::check_shuffles(
	    b, max_len, [tol](const C &, const C &, const C &sum) { return nearly_equal(sum, lift<C>(0), tol); });
}

/// γ⁻¹_w = (−1)^{|w|} γ_{reverse(w)} for a group element γ.
template <class C> WMap<C> antipode_inverse(const WMap<C> &g, double tol = 0)
{
	if (!is_group_element(g, g.cap(), tol))
		throw std::invalid_argument("antipode_inverse: argument is not a group element");
	WMap<C> r(g.alphabet(), g.cap());
	for (std::size_t i = 0; i < r.size(); ++i)
	{
		Word w = r.word(i);
		std::reverse(w.begin(), w.end());
		r.at(i) = (w.size() % 2 ? lift<C>(-1) : lift<C>(1)) * g[w];
	}
	return r;
}

/// τ_w = tⁿ/n! for every n-letter word: the coefficients of an exact flow.
template <class C> WMap<C> taylor_coeffs(const Alphabet &alphabet, const C &t, std::size_t cap)
{
	WMap<C> r(alphabet, cap);
	C power = lift<C>(1);
	for (std::size_t n = 0; n <= cap; ++n)
	{
		if (n > 0)
			power = power * t;
		C value = power * lift<C>(Rational(1) / factorial(unsigned(n)));
		auto [first, last] = r.grade(n);
		for (std::size_t i = first; i < last; ++i)
			r.at(i) = value;
	}
	return r;
}

/// Per-letter forcing λ_a(t) = Σ c t^m exp(i (K·ω) t).
struct LambdaSpec
{
	struct Term
	{
		Complex c;
		int m;
		std::vector<int> K;
	};

	std::vector<double> omega;
	std::vector<std::vector<Term>> letters;

	/// λ ≡ 1 for every letter.
	static LambdaSpec constant(std::size_t nletters)
	{
		return {{}, std::vector<std::vector<Term>>(nletters, {Term{1.0, 0, {}}})};
	}

	/// λ_k(t) = exp(i k·ω t) for each mode k of the alphabet.
	static LambdaSpec oscillatory(const std::vector<double> &omega, const Alphabet &modes)
	{
		if (modes.mode_dim() != omega.size())
			throw std::invalid_argument("frequency vector and modes have different dimensions");
		LambdaSpec s{omega, {}};
		for (auto const &k : modes.modes())
			s.letters.push_back({Term{1.0, 0, k}});
		return s;
	}

	ExpPoly letter(int a) const
	{
		ExpPoly p(omega);
		for (auto const &t : letters.at(std::size_t(a)))
		{
			if (t.K.size() != omega.size())
				throw std::invalid_argument("forcing term has wrong frequency dimension");
			p.add({t.K, t.m}, t.c);
		}
		return p;
	}
};

/// α_w(t) as exponential polynomials: α_∅ = 1, α_{w a}(t) = ∫₀ᵗ λ_a α_w.
inline std::vector<ExpPoly> iterated_integrals(const LambdaSpec &spec, const Alphabet &alphabet, std::size_t cap)
{
	if (spec.letters.size() != alphabet.size())
		throw std::invalid_argument("forcing specification does not match the alphabet size");
	WMap<Complex> shape(alphabet, cap);
	std::vector<ExpPoly> lambda;
	for (std::size_t a = 0; a < alphabet.size(); ++a)
		lambda.push_back(spec.letter(int(a)));
	std::vector<ExpPoly> alpha;
	alpha.reserve(shape.size());
	alpha.push_back(ExpPoly::constant(spec.omega, 1.0));
	for (std::size_t i = 1; i < shape.size(); ++i)
	{
		Word w = shape.word(i);
		int last = w.back();
		w.pop_back();
		alpha.push_back((lambda[std::size_t(last)] * alpha[shape.index(w)]).integral());
	}
	return alpha;
}

namespace detail {

/// Last entry of exp(tA) e₀ for A lower bidiagonal with diagonal −iν_j and
/// unit subdiagonal, by scaling and squaring a Taylor polynomial.
inline Complex bidiagonal_exp_corner(const std::vector<double> &nu, double t)
{
	std::size_t n = nu.size();
	using Matrix = std::vector<std::vector<Complex>>;
	double norm = 1;
	for (double v : nu)
		norm = std::max(norm, std::abs(v) + 1);
	norm *= std::abs(t);
	int squarings = 0;
	while (norm > 0.5)
	{
		norm /= 2;
		++squarings;
	}
	double scale = std::ldexp(t, -squarings);
	Matrix A(n, std::vector<Complex>(n, 0.0));
	for (std::size_t j = 0; j < n; ++j)
	{
		A[j][j] = Complex(0, -nu[j] * scale);
		if (j > 0)
			A[j][j - 1] = scale;
	}
	auto multiply = [n](const Matrix &X, const Matrix &Y) {
		Matrix Z(n, std::vector<Complex>(n, 0.0));
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t k = 0; k <= i; ++k)
				for (std::size_t j = 0; j <= k; ++j)
					Z[i][j] += X[i][k] * Y[k][j];
		return Z;
	};
	Matrix E(n, std::vector<Complex>(n, 0.0)), term = E;
	for (std::size_t j = 0; j < n; ++j)
		E[j][j] = term[j][j] = 1.0;
	for (int k = 1; k <= 24; ++k)
	{
		term = multiply(term, A);
		for (auto &row : term)
			for (auto &c : row)
				c /= double(k);
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = 0; j <= i; ++j)
				E[i][j] += term[i][j];
	}
	for (int s = 0; s < squarings; ++s)
		E = multiply(E, E);
	return E[n - 1][0];
}

inline bool purely_exponential(const LambdaSpec &spec)
{
	for (auto const &terms : spec.letters)
		for (auto const &t : terms)
			if (t.m != 0)
				return false;
	return true;
}

/// ∫_{0<s₁<⋯<sₙ<t} Π exp(iμ_j s_j) ds, computed from the substitution
/// z_j = exp(−iν_j s) y_j with ν_j = μ₁+⋯+μ_j, which makes the recursion
/// y_j′ = exp(iμ_j s) y_{j−1} autonomous. Stable when some ν_j nearly vanish.
inline Complex exponential_iterated_integral(const std::vector<double> &mu, double t)
{
	std::vector<double> nu{0.0};
	for (double m : mu)
		nu.push_back(nu.back() + m);
	return std::exp(Complex(0, nu.back() * t)) * bidiagonal_exp_corner(nu, t);
}

} // namespace detail

/// Values at t of the iterated integrals of the forcing functions.
///
/// Forcings without powers of t go through the autonomous matrix form, which
/// stays accurate when letter frequencies nearly cancel; the closed-form
/// exponential polynomials would divide by those small sums.
inline WMap<Complex> iterated_integral_coeffs(const LambdaSpec &spec, const Alphabet &alphabet, double t,
                                              std::size_t cap)
{
	if (!detail::purely_exponential(spec))
	{
		auto alpha = iterated_integrals(spec, alphabet, cap);
		WMap<Complex> r(alphabet, cap);
		for (std::size_t i = 0; i < r.size(); ++i)
			r.at(i) = alpha[i](t);
		return r;
	}
	if (spec.letters.size() != alphabet.size())
		throw std::invalid_argument("forcing specification does not match the alphabet size");
	ExpPoly probe(spec.omega);
	std::vector<std::vector<std::pair<Complex, double>>> terms(alphabet.size());
	for (std::size_t a = 0; a < alphabet.size(); ++a)
		for (auto const &term : spec.letters[a])
		{
			if (term.K.size() != spec.omega.size())
				throw std::invalid_argument("forcing term has wrong frequency dimension");
			terms[a].emplace_back(term.c, probe.frequency(term.K));
		}
	WMap<Complex> r(alphabet, cap);
	r.at(0) = 1.0;
	for (std::size_t i = 1; i < r.size(); ++i)
	{
		Word w = r.word(i);
		// expand the product of sums over one term per letter
		std::vector<std::size_t> pick(w.size(), 0);
		Complex total = 0;
		bool done = false;
		for (auto const &a : w)
			if (terms[std::size_t(a)].empty())
				done = true;
		while (!done)
		{
			Complex c = 1.0;
			std::vector<double> mu;
			for (std::size_t j = 0; j < w.size(); ++j)
			{
				auto const &[cj, mj] = terms[std::size_t(w[j])][pick[j]];
				c *= cj;
				mu.push_back(mj);
			}
			total += c * detail::exponential_iterated_integral(mu, t);
			std::size_t j = 0;
			while (j < w.size() && ++pick[j] == terms[std::size_t(w[j])].size())
				pick[j++] = 0;
			done = j == w.size();
		}
		r.at(i) = total;
	}
	return r;
}

} // namespace bseries

#endif // BSERIES_WORDS_HPP
