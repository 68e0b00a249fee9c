#ifndef BSERIES_TREES_HPP
#define BSERIES_TREES_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bseries {

/// A rooted tree stored as its canonical level sequence.
///
/// The level sequence lists vertex depths in preorder, the root at level 1.
/// Children of every vertex are ordered by descending lexicographic order of
/// their own level sequences, so two trees are isomorphic exactly when their
/// sequences are equal. The default-constructed tree is the empty tree.
class RootedTree
{
  public:
	RootedTree() = default;

	/// Accepts any valid level sequence and canonicalizes it.
	static RootedTree from_levels(const std::vector<int> &levels)
	{
		if (levels.empty())
			return {};
		if (levels.front() != 1)
			throw std::invalid_argument("level sequence must start with 1");
		for (std::size_t i = 1; i < levels.size(); ++i)
			if (levels[i] < 2 || levels[i] > levels[i - 1] + 1)
				throw std::invalid_argument("invalid level sequence");
		std::size_t pos = 0;
		return parse(levels, pos);
	}

	static RootedTree leaf() { return from_levels_unchecked({1}); }

	/// The tree whose root has the given subtrees as children.
	static RootedTree from_children(std::vector<RootedTree> children)
	{
		for (auto const &c : children)
			if (c.empty())
				throw std::invalid_argument("children of a vertex must be nonempty trees");
		std::sort(children.begin(), children.end(), std::greater<>());
		std::vector<int> levels{1};
		for (auto const &c : children)
			for (int l : c.levels_)
				levels.push_back(l + 1);
		return from_levels_unchecked(std::move(levels));
	}

	std::size_t order() const { return levels_.size(); }
	bool empty() const { return levels_.empty(); }
	const std::vector<int> &levels() const { return levels_; }

	/// Subtrees hanging from the root, in canonical (descending) order.
	std::vector<RootedTree> children() const
	{
		std::vector<RootedTree> out;
		std::size_t i = 1;
		while (i < levels_.size())
		{
			std::size_t j = i + 1;
			while (j < levels_.size() && levels_[j] > 2)
				++j;
			std::vector<int> sub(levels_.begin() + i, levels_.begin() + j);
			for (int &l : sub)
				l -= 1;
			out.push_back(from_levels_unchecked(std::move(sub)));
			i = j;
		}
		return out;
	}

	std::string to_string() const
	{
		std::string s = "[";
		for (std::size_t i = 0; i < levels_.size(); ++i)
			s += (i ? "," : "") + std::to_string(levels_[i]);
		return s + "]";
	}

	friend auto operator<=>(const RootedTree &, const RootedTree &) = default;
	friend bool operator==(const RootedTree &, const RootedTree &) = default;

  private:
	static RootedTree from_levels_unchecked(std::vector<int> levels)
	{
		RootedTree t;
		t.levels_ = std::move(levels);
		return t;
	}

	// reads the subtree rooted at levels[pos] and re-emits it canonically
	static RootedTree parse(const std::vector<int> &levels, std::size_t &pos)
	{
		int root = levels[pos++];
		std::vector<RootedTree> children;
		while (pos < levels.size() && levels[pos] == root + 1)
			children.push_back(parse(levels, pos));
		return from_children(std::move(children));
	}

	std::vector<int> levels_;
};

} // namespace bseries

template <> struct std::hash<bseries::RootedTree>
{
	std::size_t operator()(const bseries::RootedTree &t) const noexcept
	{
		std::size_t h = 1469598103934665603ull;
		for (int l : t.levels())
			h = (h ^ std::size_t(l)) * 1099511628211ull;
		return h;
	}
};

namespace bseries {

/// A multiset of nonempty rooted trees; stored sorted so equality ignores order.
class Forest
{
  public:
	Forest() = default;
	explicit Forest(std::vector<RootedTree> trees) : trees_(std::move(trees))
	{
		for (auto const &t : trees_)
			if (t.empty())
				throw std::invalid_argument("a forest holds nonempty trees only");
		std::sort(trees_.begin(), trees_.end());
	}

	void insert(RootedTree t)
	{
		if (t.empty())
			throw std::invalid_argument("a forest holds nonempty trees only");
		trees_.insert(std::upper_bound(trees_.begin(), trees_.end(), t), std::move(t));
	}

	void merge(const Forest &o)
	{
		for (auto const &t : o.trees_)
			insert(t);
	}

	const std::vector<RootedTree> &trees() const { return trees_; }
	std::size_t size() const { return trees_.size(); }
	bool empty() const { return trees_.empty(); }
	std::size_t order() const
	{
		std::size_t n = 0;
		for (auto const &t : trees_)
			n += t.order();
		return n;
	}

	std::string to_string() const
	{
		std::string s = "{";
		for (std::size_t i = 0; i < trees_.size(); ++i)
			s += (i ? "," : "") + trees_[i].to_string();
		return s + "}";
	}

	friend auto operator<=>(const Forest &, const Forest &) = default;
	friend bool operator==(const Forest &, const Forest &) = default;

  private:
	std::vector<RootedTree> trees_;
};

/// All trees with n vertices, chain first, in descending lexicographic order
/// of level sequences (the column order of the classical tables).
inline std::vector<RootedTree> enumerate_trees(std::size_t n)
{
	if (n == 0)
		return {RootedTree()};
	std::vector<RootedTree> out;
	std::vector<int> levels(n);
	for (std::size_t i = 0; i < n; ++i)
		levels[i] = int(i) + 1;
	// successor rule of Beyer and Hedetniemi on canonical level sequences
	for (;;)
	{
		out.push_back(RootedTree::from_levels(levels));
		std::size_t p = n;
		while (p > 0 && levels[p - 1] <= 2)
			--p;
		if (p == 0)
			break;
		--p;
		std::size_t q = p;
		while (levels[q - 1] != levels[p] - 1)
			--q;
		--q;
		std::size_t shift = p - q;
		for (std::size_t i = p; i < n; ++i)
			levels[i] = levels[i - shift];
	}
	return out;
}

/// Order of the automorphism group; 1 for the empty tree.
inline std::uint64_t symmetry(const RootedTree &u)
{
	auto kids = u.children();
	std::uint64_t s = 1;
	for (std::size_t i = 0; i < kids.size();)
	{
		std::size_t j = i;
		while (j < kids.size() && kids[j] == kids[i])
			++j;
		std::uint64_t sub = symmetry(kids[i]);
		for (std::size_t m = 1; m <= j - i; ++m)
			s *= m * sub;
		i = j;
	}
	return s;
}

/// Tree factorial u!; 1 for the empty tree.
inline std::uint64_t density(const RootedTree &u)
{
	if (u.empty())
		return 1;
	std::uint64_t d = u.order();
	for (auto const &c : u.children())
		d *= density(c);
	return d;
}

/// u ∘ v: the root of v is grafted onto the root of u.
inline RootedTree butcher_product(const RootedTree &u, const RootedTree &v)
{
	if (u.empty() || v.empty())
		throw std::invalid_argument("butcher_product requires nonempty trees");
	auto kids = u.children();
	kids.push_back(v);
	return RootedTree::from_children(std::move(kids));
}

struct CoproductTerm
{
	RootedTree remainder; // part still attached to the root, or empty
	Forest removed;       // subtrees cut off
	std::uint64_t multiplicity = 1;

	friend bool operator==(const CoproductTerm &, const CoproductTerm &) = default;
};

namespace detail {

using Pruning = std::map<std::pair<RootedTree, Forest>, std::uint64_t>;

inline Pruning prunings(const RootedTree &u)
{
	Pruning result;
	if (u.empty())
	{
		result[{RootedTree(), Forest()}] = 1;
		return result;
	}
	result[{RootedTree(), Forest({u})}] += 1;

	// the root stays; each child is either cut off whole or pruned recursively
	std::map<std::pair<std::vector<RootedTree>, Forest>, std::uint64_t> partial;
	partial[{{}, Forest()}] = 1;
	for (auto const &child : u.children())
	{
		auto options = prunings(child);
		std::map<std::pair<std::vector<RootedTree>, Forest>, std::uint64_t> next;
		for (auto const &[state, count] : partial)
			for (auto const &[opt, mult] : options)
			{
				auto kept = state.first;
				if (!opt.first.empty())
					kept.push_back(opt.first);
				std::sort(kept.begin(), kept.end());
				Forest cut = state.second;
				cut.merge(opt.second);
				next[{std::move(kept), std::move(cut)}] += count * mult;
			}
		partial = std::move(next);
	}
	for (auto const &[state, count] : partial)
		result[{RootedTree::from_children(state.first), state.second}] += count;
	return result;
}

} // namespace detail

/// Admissible prunings of u, the coproduct behind composition of B-series.
///
/// Each term pairs the subtree left attached to the root with the forest of
/// pieces cut off; distinct cuts giving the same pair are merged into the
/// multiplicity. Complete uprooting (∅, {u}) and no pruning (u, {}) are both
/// included. Terms are sorted by remainder order, then by remainder and
/// forest.
inline std::vector<CoproductTerm> coproduct(const RootedTree &u)
{
	std::vector<CoproductTerm> out;
	for (auto const &[key, mult] : detail::prunings(u))
		out.push_back({key.first, key.second, mult});
	std::stable_sort(out.begin(), out.end(), [](auto const &a, auto const &b) {
		return a.remainder.order() < b.remainder.order();
	});
	return out;
}

/// Every tree of order ≤ cap with precomputed index, σ, u! and coproduct.
///
/// Trees are grouped by order (∅ first) and enumerated within an order as in
/// enumerate_trees. Catalogs are immutable and shared; obtain one through
/// tree_catalog().
class TreeCatalog
{
  public:
	struct IndexedTerm
	{
		std::size_t remainder;
		std::vector<std::size_t> removed;
		std::uint64_t multiplicity;
	};

	explicit TreeCatalog(std::size_t cap) : cap_(cap)
	{
		for (std::size_t n = 0; n <= cap; ++n)
		{
			begin_.push_back(trees_.size());
			for (auto &t : enumerate_trees(n))
			{
				index_.emplace(t, trees_.size());
				trees_.push_back(std::move(t));
			}
		}
		begin_.push_back(trees_.size());
		for (auto const &t : trees_)
		{
			symmetry_.push_back(bseries::symmetry(t));
			density_.push_back(bseries::density(t));
			std::vector<IndexedTerm> terms;
			for (auto const &term : bseries::coproduct(t))
			{
				IndexedTerm it{index_.at(term.remainder), {}, term.multiplicity};
				for (auto const &r : term.removed.trees())
					it.removed.push_back(index_.at(r));
				terms.push_back(std::move(it));
			}
			coproducts_.push_back(std::move(terms));
		}
	}

	std::size_t cap() const { return cap_; }
	std::size_t size() const { return trees_.size(); }
	const std::vector<RootedTree> &trees() const { return trees_; }
	const RootedTree &tree(std::size_t i) const { return trees_[i]; }
	std::size_t order(std::size_t i) const { return trees_[i].order(); }

	/// Index range [first, last) of the trees with exactly n vertices.
	std::pair<std::size_t, std::size_t> grade(std::size_t n) const
	{
		return {begin_.at(n), begin_.at(n + 1)};
	}

	std::size_t index(const RootedTree &t) const
	{
		auto it = index_.find(t);
		if (it == index_.end())
			throw std::out_of_range("tree " + t.to_string() + " exceeds grade cap " +
			                        std::to_string(cap_));
		return it->second;
	}
	bool contains(const RootedTree &t) const { return index_.count(t) != 0; }

	std::uint64_t symmetry(std::size_t i) const { return symmetry_[i]; }
	std::uint64_t density(std::size_t i) const { return density_[i]; }
	const std::vector<IndexedTerm> &coproduct(std::size_t i) const { return coproducts_[i]; }

  private:
	std::size_t cap_;
	std::vector<RootedTree> trees_;
	std::vector<std::size_t> begin_;
	std::unordered_map<RootedTree, std::size_t> index_;
	std::vector<std::uint64_t> symmetry_, density_;
	std::vector<std::vector<IndexedTerm>> coproducts_;
};

/// Shared catalog for a grade cap; built once, safe to call concurrently.
inline const TreeCatalog &tree_catalog(std::size_t cap)
{
	static std::mutex mutex;
	static std::map<std::size_t, std::unique_ptr<TreeCatalog>> cache;
	std::lock_guard lock(mutex);
	auto &slot = cache[cap];
	if (!slot)
		slot = std::make_unique<TreeCatalog>(cap);
	return *slot;
}

} // namespace bseries

#endif // BSERIES_TREES_HPP
