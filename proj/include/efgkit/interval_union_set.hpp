#pragma once

// Dynamic set of pairwise-disjoint integer intervals in an AVL tree keyed by
// left endpoint. Each node carries the maximum right endpoint and the total
// span (sum of lengths) of its subtree.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace efgkit {

struct Interval {
    std::int64_t a;
    std::int64_t b;  // inclusive; a <= b

    std::int64_t length() const noexcept { return b - a + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

class IntervalUnionSet {
public:
    IntervalUnionSet() = default;
    IntervalUnionSet(const IntervalUnionSet&) = delete;
    IntervalUnionSet& operator=(const IntervalUnionSet&) = delete;
    IntervalUnionSet(IntervalUnionSet&&) noexcept = default;
    IntervalUnionSet& operator=(IntervalUnionSet&&) noexcept = default;

    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    std::int64_t total_span() const noexcept { return sum(root_.get()); }

    void insert(Interval iv) {
        if (iv.a > iv.b) throw std::invalid_argument("interval with a > b");
        if (overlaps(iv))
            throw std::logic_error("interval [" + std::to_string(iv.a) + ".." + std::to_string(iv.b) + "] overlaps a stored one");
        root_ = insert(std::move(root_), iv);
        ++count_;
    }

    void erase(Interval iv) {
        bool found = false;
        root_ = erase(std::move(root_), iv, found);
        if (!found)
            throw std::logic_error("interval [" + std::to_string(iv.a) + ".." + std::to_string(iv.b) + "] not stored");
        --count_;
    }

    bool contains(Interval iv) const {
        const Node* t = root_.get();
        while (t) {
            if (iv.a == t->iv.a) return t->iv.b == iv.b;
            t = iv.a < t->iv.a ? t->left.get() : t->right.get();
        }
        return false;
    }

    bool overlaps(Interval iv) const {
        // the candidate is the stored interval with the largest a <= iv.b
        const Node* t = root_.get();
        const Node* best = nullptr;
        while (t) {
            if (t->iv.a <= iv.b) {
                best = t;
                t = t->right.get();
            } else {
                t = t->left.get();
            }
        }
        return best && best->iv.b >= iv.a;
    }

    // Total length of the stored intervals [a_i..b_i] with a <= a_i and b_i <= b.
    std::int64_t span(std::int64_t a, std::int64_t b) const {
        // Disjointness makes both endpoint sequences sorted, so the contained
        // intervals are the ones ending by b minus the ones starting before a.
        const std::int64_t ending = prefix_sum([&](const Interval& iv) { return iv.b <= b; });
        const std::int64_t before = prefix_sum([&](const Interval& iv) { return iv.a < a; });
        return std::max<std::int64_t>(0, ending - before);
    }

    // Stored intervals contained in [a..b], in order.
    std::vector<Interval> within(std::int64_t a, std::int64_t b) const {
        std::vector<Interval> out;
        collect(root_.get(), a, b, out);
        return out;
    }

    std::vector<Interval> intervals() const {
        std::vector<Interval> out;
        collect(root_.get(), INT64_MIN, INT64_MAX, out);
        return out;
    }

    // Checks AVL balance and both augmentations; for tests.
    bool check_invariants() const {
        bool ok = true;
        check(root_.get(), ok);
        const auto all = intervals();
        for (std::size_t i = 1; i < all.size(); ++i) ok = ok && all[i - 1].b < all[i].a;
        return ok && all.size() == count_;
    }

private:
    struct Node {
        Interval iv;
        std::unique_ptr<Node> left, right;
        int height = 1;
        std::int64_t span_sum = 0;
        std::int64_t max_b = 0;
    };
    using Ptr = std::unique_ptr<Node>;

    static int height(const Node* t) { return t ? t->height : 0; }
    static std::int64_t sum(const Node* t) { return t ? t->span_sum : 0; }

    static void update(Node* t) {
        t->height = 1 + std::max(height(t->left.get()), height(t->right.get()));
        t->span_sum = sum(t->left.get()) + t->iv.length() + sum(t->right.get());
        t->max_b = t->iv.b;
        if (t->left) t->max_b = std::max(t->max_b, t->left->max_b);
        if (t->right) t->max_b = std::max(t->max_b, t->right->max_b);
    }

    static Ptr rotate_right(Ptr t) {
        Ptr l = std::move(t->left);
        t->left = std::move(l->right);
        update(t.get());
        l->right = std::move(t);
        update(l.get());
        return l;
    }

    static Ptr rotate_left(Ptr t) {
        Ptr r = std::move(t->right);
        t->right = std::move(r->left);
        update(t.get());
        r->left = std::move(t);
        update(r.get());
        return r;
    }

    static Ptr rebalance(Ptr t) {
        update(t.get());
        const int bf = height(t->left.get()) - height(t->right.get());
        if (bf > 1) {
            if (height(t->left->left.get()) < height(t->left->right.get())) t->left = rotate_left(std::move(t->left));
            return rotate_right(std::move(t));
        }
        if (bf < -1) {
            if (height(t->right->right.get()) < height(t->right->left.get())) t->right = rotate_right(std::move(t->right));
            return rotate_left(std::move(t));
        }
        return t;
    }

    static Ptr insert(Ptr t, Interval iv) {
        if (!t) {
            auto n = std::make_unique<Node>();
            n->iv = iv;
            update(n.get());
            return n;
        }
        if (iv.a < t->iv.a)
            t->left = insert(std::move(t->left), iv);
        else
            t->right = insert(std::move(t->right), iv);
        return rebalance(std::move(t));
    }

    static Ptr take_min(Ptr t, Ptr& min_out) {
        if (!t->left) {
            Ptr rest = std::move(t->right);
            min_out = std::move(t);
            return rest;
        }
        t->left = take_min(std::move(t->left), min_out);
        return rebalance(std::move(t));
    }

    static Ptr erase(Ptr t, Interval iv, bool& found) {
        if (!t) return t;
        if (iv.a < t->iv.a) {
            t->left = erase(std::move(t->left), iv, found);
        } else if (iv.a > t->iv.a) {
            t->right = erase(std::move(t->right), iv, found);
        } else {
            if (t->iv.b != iv.b) return t;
            found = true;
            if (!t->left) return std::move(t->right);
            if (!t->right) return std::move(t->left);
            Ptr successor;
            Ptr right = take_min(std::move(t->right), successor);
            successor->left = std::move(t->left);
            successor->right = std::move(right);
            return rebalance(std::move(successor));
        }
        return rebalance(std::move(t));
    }

    // Sum of lengths over the maximal in-order prefix whose intervals satisfy pred.
    template <class Pred>
    std::int64_t prefix_sum(Pred pred) const {
        std::int64_t total = 0;
        const Node* t = root_.get();
        while (t) {
            if (pred(t->iv)) {
                total += sum(t->left.get()) + t->iv.length();
                t = t->right.get();
            } else {
                t = t->left.get();
            }
        }
        return total;
    }

    static void collect(const Node* t, std::int64_t a, std::int64_t b, std::vector<Interval>& out) {
        if (!t) return;
        if (t->iv.a >= a) collect(t->left.get(), a, b, out);
        if (t->iv.a >= a && t->iv.b <= b) out.push_back(t->iv);
        if (t->iv.b <= b || t->iv.a < a) collect(t->right.get(), a, b, out);
    }

    static void check(const Node* t, bool& ok) {
        if (!t) return;
        check(t->left.get(), ok);
        check(t->right.get(), ok);
        const int hl = height(t->left.get()), hr = height(t->right.get());
        std::int64_t mb = t->iv.b;
        if (t->left) mb = std::max(mb, t->left->max_b);
        if (t->right) mb = std::max(mb, t->right->max_b);
        ok = ok && std::abs(hl - hr) <= 1 && t->height == 1 + std::max(hl, hr) &&
             t->span_sum == sum(t->left.get()) + t->iv.length() + sum(t->right.get()) && t->max_b == mb;
    }

    Ptr root_;
    std::size_t count_ = 0;
};

}  // namespace efgkit
