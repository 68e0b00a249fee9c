#ifndef BSERIES_SPLITTING_HPP
#define BSERIES_SPLITTING_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exppoly.hpp"
#include "extended.hpp"
#include "words.hpp"

namespace bseries {

/// ψ_h = φ^P_{b_r h} ∘ φ^U_{a_r h} ∘ ⋯ ∘ φ^P_{b_1 h} ∘ φ^U_{a_1 h}: the
/// unperturbed rotation U and the perturbation P are applied alternately,
/// starting with U for a₁h.
struct SplittingScheme
{
	std::string name;
	std::vector<double> a;
	std::vector<double> b;

	std::size_t stages() const { return a.size(); }

	/// c_j = a₁ + ⋯ + a_j for j = 1..r.
	double c(std::size_t j) const
	{
		if (j < 1 || j > a.size())
			throw std::out_of_range("stage index out of range");
		double s = 0;
		for (std::size_t i = 0; i < j; ++i)
			s += a[i];
		return s;
	}

	double a_sum() const { return stages() ? c(stages()) : 0.0; }

	void validate() const
	{
		if (a.empty())
			throw std::invalid_argument("splitting scheme needs at least one stage");
		if (a.size() != b.size())
			throw std::invalid_argument("splitting scheme has " + std::to_string(a.size()) + " a-coefficients and " +
			                            std::to_string(b.size()) + " b-coefficients");
		for (std::size_t j = 0; j < a.size(); ++j)
			if (!std::isfinite(a[j]) || !std::isfinite(b[j]))
				throw std::invalid_argument("splitting coefficients must be finite");
	}

	static SplittingScheme lie_trotter() { return {"lie_trotter", {1.0}, {1.0}}; }
	static SplittingScheme strang() { return {"strang", {0.5, 0.5}, {1.0, 0.0}}; }
};

/// Coefficients (h a ω, α̃(h)) of one step, from the closed formula
/// α̃_{k₁⋯kₙ} = hⁿ Σ_{j₁≤⋯≤jₙ} b_{j₁}⋯b_{jₙ} Π_runs(1/ℓ!) exp(i(c_{j₁}k₁+⋯+c_{jₙ}kₙ)·ωh),
/// where a run is a maximal block of equal consecutive indices.
inline ExtCoeffs splitting_coeffs(const SplittingScheme &s, const std::vector<double> &omega, double h,
                                  const Alphabet &modes, std::size_t cap)
{
	s.validate();
	detail::require_modes(modes);
	if (modes.mode_dim() != omega.size())
		throw std::invalid_argument("frequency vector and modes have different dimensions");
	std::size_t r = s.stages();
	std::vector<double> c(r);
	for (std::size_t j = 0; j < r; ++j)
		c[j] = s.c(j + 1);
	std::vector<double> freq; // k·ω per letter
	for (auto const &k : modes.modes())
	{
		double f = 0;
		for (std::size_t j = 0; j < k.size(); ++j)
			f += k[j] * omega[j];
		freq.push_back(f);
	}

	WMap<Complex> alpha(modes, cap);
	alpha.at(0) = 1.0;
	for (std::size_t i = 1; i < alpha.size(); ++i)
	{
		Word w = alpha.word(i);
		std::size_t n = w.size();
		Complex total = 0;
		std::vector<std::size_t> js(n, 0);
		// nondecreasing stage sequences j₁ ≤ ⋯ ≤ jₙ
		for (;;)
		{
			double weight = 1, phase = 0, run_factor = 1;
			std::size_t run = 0;
			for (std::size_t m = 0; m < n; ++m)
			{
				weight *= s.b[js[m]];
				phase += c[js[m]] * freq[std::size_t(w[m])];
				run = (m > 0 && js[m] == js[m - 1]) ? run + 1 : 1;
				run_factor /= double(run);
			}
			if (weight != 0)
				total += weight * run_factor * std::exp(Complex(0, phase * h));
			std::size_t m = n;
			while (m > 0 && js[m - 1] == r - 1)
				--m;
			if (m == 0)
				break;
			std::size_t next = js[m - 1] + 1;
			for (std::size_t q = m - 1; q < n; ++q)
				js[q] = next;
		}
		alpha.at(i) = std::pow(h, double(n)) * total;
	}
	std::vector<Complex> shift;
	for (double w : omega)
		shift.emplace_back(h * s.a_sum() * w);
	return {std::move(shift), std::move(alpha)};
}

/// The same coefficients as the ★ product
/// (a₁hω, 1)★(0, τ(b₁h))★⋯★(a_r hω, 1)★(0, τ(b_r h)).
inline ExtCoeffs splitting_coeffs_by_composition(const SplittingScheme &s, const std::vector<double> &omega, double h,
                                                 const Alphabet &modes, std::size_t cap)
{
	s.validate();
	detail::require_modes(modes);
	if (modes.mode_dim() != omega.size())
		throw std::invalid_argument("frequency vector and modes have different dimensions");
	ExtCoeffs result = ExtCoeffs::unit(modes, cap);
	for (std::size_t j = 0; j < s.stages(); ++j)
	{
		std::vector<Complex> rot;
		for (double w : omega)
			rot.emplace_back(s.a[j] * h * w);
		result = bigstar(result, ExtCoeffs{std::move(rot), WMap<Complex>::unit(modes, cap)});
		result = bigstar(result, ExtCoeffs{std::vector<Complex>(omega.size(), 0.0),
		                                   taylor_coeffs<Complex>(modes, Complex(s.b[j] * h), cap)});
	}
	return result;
}

/// A multiset of letters whose frequency sum times h is 2πj with j ≠ 0.
struct Resonance
{
	Word letters; // nondecreasing letter indices
	long j;
};

namespace detail {

template <class Visit> void for_each_multiset(std::size_t letters, std::size_t max_size, Visit visit)
{
	Word current;
	auto rec = [&](auto &self, int from) -> void {
		if (!current.empty())
			visit(current);
		if (current.size() == max_size)
			return;
		for (int a = from; a < int(letters); ++a)
		{
			current.push_back(a);
			self(self, a);
			current.pop_back();
		}
	};
	rec(rec, 0);
}

inline double letter_sum_frequency(const Alphabet &modes, const std::vector<double> &omega, const Word &w)
{
	auto K = modes.mode_sum(w);
	double f = 0;
	for (std::size_t j = 0; j < K.size(); ++j)
		f += K[j] * omega[j];
	return f;
}

inline bool resonant(double x, long &j)
{
	j = std::lround(x / (2 * std::numbers::pi));
	return j != 0 && std::abs(x - 2 * std::numbers::pi * double(j)) < 1e-8 * std::abs(x);
}

} // namespace detail

/// All multisets of at most n letters with (Σk)·ωh within 1e-8 (relative) of
/// 2πj for some integer j ≠ 0.
inline std::vector<Resonance> detect_resonances(const std::vector<double> &omega, double h, std::size_t n,
                                                const Alphabet &modes)
{
	detail::require_modes(modes);
	if (modes.mode_dim() != omega.size())
		throw std::invalid_argument("frequency vector and modes have different dimensions");
	std::vector<Resonance> found;
	detail::for_each_multiset(modes.size(), n, [&](const Word &w) {
		long j;
		if (detail::resonant(detail::letter_sum_frequency(modes, omega, w) * h, j))
			found.push_back({w, j});
	});
	return found;
}

/// Raised when the modified system cannot be built because a letter
/// combination is numerically resonant with the step.
class ResonanceError : public std::runtime_error
{
  public:
	ResonanceError(Word letters, long j, const Alphabet &modes)
	    : std::runtime_error("numerical resonance: letters " + describe(letters, modes) +
	                         " have (k₁+⋯+kₙ)·ωh = 2πj with j = " + std::to_string(j)),
	      letters_(std::move(letters)), j_(j)
	{
	}

	const Word &letters() const { return letters_; }
	long multiple() const { return j_; }

  private:
	static std::string describe(const Word &w, const Alphabet &modes)
	{
		std::string s;
		for (std::size_t i = 0; i < w.size(); ++i)
			s += (i ? " + (" : "(") + modes.name(w[i]) + ")";
		return s;
	}

	Word letters_;
	long j_;
};

namespace detail {

/// E(λ, h) = ∫₀ʰ exp(iλt) dt, with the Taylor form near λh = 0.
inline Complex phase_integral(double lambda, double h)
{
	double x = lambda * h;
	if (std::abs(x) < 1e-6)
	{
		Complex ix(0, x);
		return h * (1.0 + ix / 2.0 + ix * ix / 6.0);
	}
	return (std::exp(Complex(0, x)) - 1.0) / Complex(0, lambda);
}

/// Grade-by-grade solution of A′ = A ⋆ Ξ_{tω}β with A(0) = 1, keeping each
/// entry as an exponential polynomial in t.
class ModifiedFlow
{
  public:
	ModifiedFlow(const std::vector<double> &omega, const Alphabet &modes, std::size_t cap)
	    : omega_(omega), shape_(modes, cap), beta_(modes, cap)
	{
		A_.reserve(shape_.size());
		A_.push_back(ExpPoly::constant(omega_, 1.0));
	}

	const WMap<Complex> &beta() const { return beta_; }

	/// ∫₀ᵗ Σ_{w=uv, u≠∅, v≠∅} A_u β_v exp(iK_v·ω s) ds for the next word.
	ExpPoly known_part(std::size_t i) const
	{
		Word w = shape_.word(i);
		ExpPoly integrand(omega_);
		for (std::size_t split = 1; split < w.size(); ++split)
		{
			Word u(w.begin(), w.begin() + std::ptrdiff_t(split));
			Word v(w.begin() + std::ptrdiff_t(split), w.end());
			Complex bv = beta_[v];
			if (bv == Complex(0))
				continue;
			integrand += A_.at(shape_.index(u)) *
			             ExpPoly::term(omega_, shape_.alphabet().mode_sum(v), 0, bv);
		}
		return integrand.integral();
	}

	/// Fix β_w for the next word (in index order) and record A_w.
	void push(std::size_t i, const ExpPoly &known, Complex beta_w)
	{
		if (i != A_.size())
			throw std::logic_error("modified flow words must be added in order");
		beta_.at(i) = beta_w;
		ExpPoly own = ExpPoly::term(omega_, shape_.alphabet().mode_sum(shape_.word(i)), 0, beta_w).integral();
		ExpPoly total = known;
		total += own;
		A_.push_back(std::move(total));
	}

	Complex value(std::size_t i, double t) const { return A_.at(i)(t); }

  private:
	std::vector<double> omega_;
	WMap<Complex> shape_;
	WMap<Complex> beta_;
	std::vector<ExpPoly> A_;
};

} // namespace detail

/// Coefficients (hω, A(h)) of the h-flow of W̄_{(ω,β)}, where A(0) = 1 and
/// A′(t) = A(t) ⋆ Ξ_{tω}β.
inline ExtCoeffs exp_modified(const std::vector<double> &omega, const WMap<Complex> &beta, double h, std::size_t cap,
                              double tol = 1e-9)
{
	auto const &modes = beta.alphabet();
	detail::require_modes(modes);
	if (modes.mode_dim() != omega.size())
		throw std::invalid_argument("frequency vector and modes have different dimensions");
	if (cap > beta.cap())
		throw std::invalid_argument("exp_modified: cap exceeds the coefficients");
	if (!is_lie_element(beta, cap, tol))
		throw std::invalid_argument("exp_modified: β is not a Lie element");
	detail::ModifiedFlow flow(omega, modes, cap);
	WMap<Complex> A(modes, cap);
	A.at(0) = 1.0;
	for (std::size_t i = 1; i < A.size(); ++i)
	{
		auto known = flow.known_part(i);
		flow.push(i, known, beta.at(i));
		A.at(i) = flow.value(i, h);
	}
	std::vector<Complex> shift;
	for (double w : omega)
		shift.emplace_back(h * w);
	return {std::move(shift), std::move(A)};
}

/// β̃ with β̃_w = 0 beyond n letters whose flow reproduces the integrator's
/// word coefficients through n letters.
struct ModifiedSystem
{
	std::vector<double> omega;
	double h = 0;
	std::size_t n = 0;
	WMap<Complex> beta;
	std::vector<std::string> warnings;
};

/// Solves for β̃ grade by grade: the new unknown β̃_w enters A_w(h) only
/// through E(λ_w, h) β̃_w with λ_w = (Σk)·ω.
inline ModifiedSystem modified_system(const SplittingScheme &s, const std::vector<double> &omega, double h,
                                      std::size_t n, const Alphabet &modes)
{
	if (h == 0)
		throw std::invalid_argument("modified_system needs a nonzero step");
	auto target = splitting_coeffs(s, omega, h, modes, n);
	detail::ModifiedFlow flow(omega, modes, n);
	ModifiedSystem result{omega, h, n, WMap<Complex>(modes, n), {}};
	for (std::size_t i = 1; i < target.coeffs.size(); ++i)
	{
		Word w = target.coeffs.word(i);
		double lambda = detail::letter_sum_frequency(modes, omega, w);
		Complex E = detail::phase_integral(lambda, h);
		if (std::abs(E) < 1e-8 * std::abs(h))
		{
			long j;
			if (!detail::resonant(lambda * h, j))
				j = std::lround(lambda * h / (2 * std::numbers::pi));
			throw ResonanceError(w, j, modes);
		}
		if (std::abs(E) < 1e-6 * std::abs(h))
			result.warnings.push_back("near resonance for letters " + modes.to_string(w) + ": |E| = " +
			                          std::to_string(std::abs(E)));
		auto known = flow.known_part(i);
		Complex beta_w = (target.coeffs.at(i) - known(h)) / E;
		flow.push(i, known, beta_w);
	}
	result.beta = flow.beta();
	return result;
}

} // namespace bseries

#endif // BSERIES_SPLITTING_HPP
