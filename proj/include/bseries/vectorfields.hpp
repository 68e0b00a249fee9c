#ifndef BSERIES_VECTORFIELDS_HPP
#define BSERIES_VECTORFIELDS_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "butcher.hpp"
#include "polynomial.hpp"
#include "trees.hpp"
#include "words.hpp"

namespace bseries {

namespace detail {

template <class U> void axpy(std::vector<U> &acc, const U &s, const std::vector<U> &v)
{
	for (std::size_t i = 0; i < acc.size(); ++i)
		acc[i] += s * v[i];
}

template <class T> void require_field(const PolyMap<T> &f)
{
	if (f.dim() != f.nvars())
		throw std::invalid_argument("vector field must have as many components as variables");
}

template <class T, class U> void require_point(const PolyMap<T> &f, const std::vector<U> &x)
{
	if (x.size() != f.nvars())
		throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", field expects " +
		                            std::to_string(f.nvars()));
}

template <class T, class U>
std::vector<U> elementary_differential_rec(const PolyMap<T> &f, const RootedTree &u, const std::vector<U> &x)
{
	auto kids = u.children();
	if (kids.empty())
		return f.evaluate(x);
	std::vector<std::vector<U>> vs;
	vs.reserve(kids.size());
	for (auto const &c : kids)
		vs.push_back(elementary_differential_rec(f, c, x));
	return f.derivative_apply(x, vs);
}

} // namespace detail

/// ℱ_u(x): a leaf is f(x); a node whose children evaluate to v₁..v_m is
/// f^{(m)}(x)[v₁,…,v_m].
template <class T, class U>
std::vector<U> elementary_differential(const PolyMap<T> &f, const RootedTree &u, const std::vector<U> &x)
{
	if (u.empty())
		throw std::invalid_argument("elementary differential of the empty tree");
	detail::require_field(f);
	detail::require_point(f, x);
	return detail::elementary_differential_rec(f, u, x);
}

/// δ_∅ x + Σ_{1≤|u|≤N} h^{|u|} δ_u/σ(u) ℱ_u(x).
template <class T, class U>
std::vector<U> bseries_eval(const BMap &delta, const PolyMap<T> &f, const std::vector<U> &x, const U &h,
                            std::size_t N)
{
	if (N > delta.grade_cap())
		throw std::invalid_argument("bseries_eval: N exceeds the grade cap of the coefficients");
	detail::require_field(f);
	detail::require_point(f, x);
	auto const &cat = delta.catalog();
	std::vector<U> out(x.size(), lift<U>(0));
	detail::axpy(out, lift<U>(delta.at(0)), x);

	// ℱ by catalog index, built from the children's values
	std::vector<std::vector<U>> F(cat.size());
	U power = lift<U>(1);
	std::size_t current = 0;
	for (std::size_t i = 1; i < cat.size() && cat.order(i) <= N; ++i)
	{
		auto kids = cat.tree(i).children();
		if (kids.empty())
			F[i] = f.evaluate(x);
		else
		{
			std::vector<std::vector<U>> vs;
			for (auto const &c : kids)
				vs.push_back(F[cat.index(c)]);
			F[i] = f.derivative_apply(x, vs);
		}
		while (current < cat.order(i))
		{
			power = power * h;
			++current;
		}
		if (delta.at(i) != 0)
			detail::axpy(out, power * lift<U>(delta.at(i) / Rational(cat.symmetry(i))), F[i]);
	}
	return out;
}

/// Cache of word-basis maps f_w for a family of letter fields:
/// f_∅(x) = x and f_{a₁⋯aₙ} = ∂f_{a₂⋯aₙ} · f_{a₁}.
template <class T> class WordBasis
{
  public:
	explicit WordBasis(std::vector<PolyMap<T>> fields) : fields_(std::move(fields))
	{
		if (fields_.empty())
			throw std::invalid_argument("word basis needs at least one letter field");
		for (auto const &f : fields_)
		{
			detail::require_field(f);
			if (f.nvars() != fields_[0].nvars())
				throw std::invalid_argument("letter fields have different dimensions");
		}
	}

	std::size_t letters() const { return fields_.size(); }
	std::size_t dim() const { return fields_[0].nvars(); }
	const PolyMap<T> &field(int a) const { return fields_.at(std::size_t(a)); }

	const PolyMap<T> &operator()(const Word &w)
	{
		auto it = cache_.find(w);
		if (it != cache_.end())
			return it->second;
		PolyMap<T> value;
		if (w.empty())
			value = PolyMap<T>::identity(dim());
		else
		{
			check_letter(w[0]);
			if (w.size() == 1)
				value = fields_[std::size_t(w[0])];
			else
			{
				Word rest(w.begin() + 1, w.end());
				value = (*this)(rest).jacobian_apply(fields_[std::size_t(w[0])]);
			}
		}
		return cache_.emplace(w, std::move(value)).first->second;
	}

	/// [[⋯[f_{a₁}, f_{a₂}]⋯], f_{aₙ}] for nonempty w.
	const PolyMap<T> &nested_bracket(const Word &w);

  private:
	void check_letter(int a) const
	{
		if (a < 0 || std::size_t(a) >= fields_.size())
			throw std::invalid_argument("no field for letter index " + std::to_string(a));
	}

	std::vector<PolyMap<T>> fields_;
	std::map<Word, PolyMap<T>> cache_;
	std::map<Word, PolyMap<T>> brackets_;
};

/// Jacobi bracket [f, g] = (∂g) f − (∂f) g.
template <class T> PolyMap<T> jacobi_bracket(const PolyMap<T> &f, const PolyMap<T> &g)
{
	detail::require_field(f);
	detail::require_field(g);
	if (f.nvars() != g.nvars())
		throw std::invalid_argument("jacobi_bracket: fields have different dimensions");
	return g.jacobian_apply(f) - f.jacobian_apply(g);
}

template <class T> const PolyMap<T> &WordBasis<T>::nested_bracket(const Word &w)
{
	if (w.empty())
		throw std::invalid_argument("nested bracket of the empty word");
	auto it = brackets_.find(w);
	if (it != brackets_.end())
		return it->second;
	for (int a : w)
		check_letter(a);
	PolyMap<T> value;
	if (w.size() == 1)
		value = fields_[std::size_t(w[0])];
	else
	{
		Word prefix(w.begin(), w.end() - 1);
		value = jacobi_bracket(nested_bracket(prefix), fields_[std::size_t(w.back())]);
	}
	return brackets_.emplace(w, std::move(value)).first->second;
}

/// f_w(x).
template <class T, class U>
std::vector<U> word_basis(const std::vector<PolyMap<T>> &fields, const Word &w, const std::vector<U> &x)
{
	WordBasis<T> basis(fields);
	detail::require_point(basis.field(0), x);
	return basis(w).evaluate(x);
}

/// Σ_{|w|≤N} δ_w f_w(x).
template <class C, class T, class U>
std::vector<U> wordseries_eval(const WMap<C> &delta, WordBasis<T> &basis, const std::vector<U> &x, std::size_t N)
{
	if (N > delta.cap())
		throw std::invalid_argument("wordseries_eval: N exceeds the WMap cap");
	if (delta.alphabet().size() != basis.letters())
		throw std::invalid_argument("alphabet size does not match the number of letter fields");
	detail::require_point(basis.field(0), x);
	std::vector<U> out(x.size(), lift<U>(0));
	auto last = delta.grade(N).second;
	for (std::size_t i = 0; i < last; ++i)
	{
		if (delta.at(i) == C(0))
			continue;
		detail::axpy(out, lift<U>(delta.at(i)), basis(delta.word(i)).evaluate(x));
	}
	return out;
}

template <class C, class T, class U>
std::vector<U> wordseries_eval(const WMap<C> &delta, const std::vector<PolyMap<T>> &fields, const std::vector<U> &x,
                               std::size_t N)
{
	WordBasis<T> basis(fields);
	return wordseries_eval(delta, basis, x, N);
}

/// Iterated-commutator form Σ_n (1/n) Σ_{|w|=n} β_w [[⋯[f_{a₁},f_{a₂}]⋯],f_{aₙ}](x),
/// which equals the word series of β when β is a Lie element.
template <class C, class T, class U>
std::vector<U> dsw_eval(const WMap<C> &beta, WordBasis<T> &basis, const std::vector<U> &x, std::size_t N,
                        double tol = 0)
{
	if (N > beta.cap())
		throw std::invalid_argument("dsw_eval: N exceeds the WMap cap");
	if (!is_lie_element(beta, N, tol))
		throw std::invalid_argument("dsw_eval: coefficients are not a Lie element");
	if (beta.alphabet().size() != basis.letters())
		throw std::invalid_argument("alphabet size does not match the number of letter fields");
	detail::require_point(basis.field(0), x);
	std::vector<U> out(x.size(), lift<U>(0));
	for (std::size_t n = 1; n <= N; ++n)
	{
		auto [first, last] = beta.grade(n);
		for (std::size_t i = first; i < last; ++i)
		{
			if (beta.at(i) == C(0))
				continue;
			U s = lift<U>(beta.at(i)) * lift<U>(Rational(1, long(n)));
			detail::axpy(out, s, basis.nested_bracket(beta.word(i)).evaluate(x));
		}
	}
	return out;
}

template <class C, class T, class U>
std::vector<U> dsw_eval(const WMap<C> &beta, const std::vector<PolyMap<T>> &fields, const std::vector<U> &x,
                        std::size_t N, double tol = 0)
{
	WordBasis<T> basis(fields);
	return dsw_eval(beta, basis, x, N, tol);
}

namespace detail {

inline std::size_t half_dimension(std::size_t D)
{
	if (D == 0 || D % 2)
		throw std::invalid_argument("canonical structure needs an even, positive dimension, got " +
		                            std::to_string(D));
	return D / 2;
}

} // namespace detail

/// Poisson bracket {A, B} = ∇A^T J ∇B with J = [[0, I], [−I, 0]] and
/// variables ordered (p₁..p_m, q₁..q_m); so {q_i, p_i} = −1 and
/// {p_i, q_i} = 1. With this sign the Hamiltonian field of {A, B} is the
/// Jacobi bracket [X_A, X_B] as defined in jacobi_bracket.
template <class T> Polynomial<T> poisson_bracket(const Polynomial<T> &A, const Polynomial<T> &B)
{
	if (A.nvars() != B.nvars())
		throw std::invalid_argument("poisson_bracket: different numbers of variables");
	std::size_t m = detail::half_dimension(A.nvars());
	Polynomial<T> r(A.nvars());
	for (std::size_t i = 0; i < m; ++i)
	{
		r += A.partial(i) * B.partial(m + i);
		r -= A.partial(m + i) * B.partial(i);
	}
	return r;
}

/// Hamiltonian vector field J^{−1}∇H = (−∂H/∂q, ∂H/∂p).
template <class T> PolyMap<T> hamiltonian_vector_field(const Polynomial<T> &H)
{
	std::size_t m = detail::half_dimension(H.nvars());
	PolyMap<T> f(H.nvars(), H.nvars());
	for (std::size_t i = 0; i < m; ++i)
	{
		f[i] = -H.partial(m + i);
		f[m + i] = H.partial(i);
	}
	return f;
}

/// H_w = (1/n){{⋯{H_{a₁},H_{a₂}}⋯},H_{aₙ}}.
template <class T> Polynomial<T> hamiltonian_word(const std::vector<Polynomial<T>> &Hs, const Word &w)
{
	if (w.empty())
		throw std::invalid_argument("hamiltonian_word: empty word");
	for (int a : w)
		if (a < 0 || std::size_t(a) >= Hs.size())
			throw std::invalid_argument("no Hamiltonian for letter index " + std::to_string(a));
	Polynomial<T> r = Hs[std::size_t(w[0])];
	for (std::size_t k = 1; k < w.size(); ++k)
		r = poisson_bracket(r, Hs[std::size_t(w[k])]);
	return r * lift<T>(Rational(1, long(w.size())));
}

} // namespace bseries

#endif // BSERIES_VECTORFIELDS_HPP
