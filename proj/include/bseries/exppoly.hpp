#ifndef BSERIES_EXPPOLY_HPP
#define BSERIES_EXPPOLY_HPP

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace bseries {

/// Exponential polynomial Σ c t^m exp(i (K·ω) t) in one real variable t.
///
/// Frequencies are kept as integer combinations K of a fixed real frequency
/// vector ω, so terms whose frequencies coincide symbolically are merged
/// before any floating-point value is formed. Integration from 0 is done in
/// closed form; a zero frequency raises the power of t instead of dividing.
class ExpPoly
{
  public:
	using Key = std::pair<std::vector<int>, int>; // (K, m)

	explicit ExpPoly(std::vector<double> omega) : omega_(std::move(omega)) {}

	static ExpPoly constant(std::vector<double> omega, Complex c)
	{
		ExpPoly p(std::move(omega));
		p.add({std::vector<int>(p.omega_.size(), 0), 0}, c);
		return p;
	}

	/// c t^m exp(i (K·ω) t).
	static ExpPoly term(std::vector<double> omega, std::vector<int> K, int m, Complex c)
	{
		ExpPoly p(std::move(omega));
		p.add({std::move(K), m}, c);
		return p;
	}

	const std::vector<double> &omega() const { return omega_; }
	const std::map<Key, Complex> &terms() const { return terms_; }

	double frequency(const std::vector<int> &K) const
	{
		double mu = 0;
		for (std::size_t j = 0; j < K.size(); ++j)
			mu += K[j] * omega_[j];
		return mu;
	}

	/// Whether K·ω vanishes, up to the rounding of forming the dot product.
	bool is_zero_frequency(const std::vector<int> &K) const
	{
		double scale = 0;
		for (std::size_t j = 0; j < K.size(); ++j)
			scale += std::abs(K[j] * omega_[j]);
		return std::abs(frequency(K)) <= 1e-13 * scale;
	}

	void add(const Key &key, Complex c)
	{
		if (key.first.size() != omega_.size())
			throw std::invalid_argument("frequency index has wrong dimension");
		if (c == Complex(0))
			return;
		auto [it, inserted] = terms_.emplace(key, c);
		if (!inserted)
		{
			it->second += c;
			if (it->second == Complex(0))
				terms_.erase(it);
		}
	}

	ExpPoly &operator+=(const ExpPoly &o)
	{
		for (auto const &[k, c] : o.terms_)
			add(k, c);
		return *this;
	}

	friend ExpPoly operator*(const ExpPoly &a, const ExpPoly &b)
	{
		ExpPoly r(a.omega_);
		for (auto const &[ka, ca] : a.terms_)
			for (auto const &[kb, cb] : b.terms_)
			{
				std::vector<int> K = ka.first;
				for (std::size_t j = 0; j < K.size(); ++j)
					K[j] += kb.first[j];
				r.add({std::move(K), ka.second + kb.second}, ca * cb);
			}
		return r;
	}

	friend ExpPoly operator*(Complex s, const ExpPoly &a)
	{
		ExpPoly r(a.omega_);
		for (auto const &[k, c] : a.terms_)
			r.add(k, s * c);
		return r;
	}

	/// t ↦ ∫₀ᵗ p(s) ds.
	ExpPoly integral() const
	{
		const Complex I(0, 1);
		ExpPoly r(omega_);
		std::vector<int> zero(omega_.size(), 0);
		for (auto const &[key, c] : terms_)
		{
			auto const &[K, m] = key;
			if (is_zero_frequency(K))
			{
				r.add({K, m + 1}, c / double(m + 1));
				continue;
			}
			// antiderivative e^{iμs} Σ_k (−1)^k m!/(m−k)! s^{m−k} / (iμ)^{k+1}
			Complex imu = I * frequency(K);
			Complex coef = c / imu;
			for (int k = 0; k <= m; ++k)
			{
				r.add({K, m - k}, coef);
				coef *= -double(m - k) / imu;
			}
			// subtract its value at s = 0: c (−1)^m m! / (iμ)^{m+1}
			Complex at0 = c / imu;
			for (int k = 1; k <= m; ++k)
				at0 *= -double(k) / imu;
			r.add({zero, 0}, -at0);
		}
		return r;
	}

	Complex operator()(double t) const
	{
		Complex sum = 0;
		for (auto const &[key, c] : terms_)
			sum += c * std::pow(t, key.second) * std::exp(Complex(0, frequency(key.first) * t));
		return sum;
	}

  private:
	std::vector<double> omega_;
	std::map<Key, Complex> terms_;
};

} // namespace bseries

#endif // BSERIES_EXPPOLY_HPP
