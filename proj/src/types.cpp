#include "sessionforge/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace sf {

namespace {

const std::shared_ptr<const TypeNode>& bot_node() {
    static const auto n = [] {
        auto t = std::make_shared<TypeNode>();
        t->kind = TypeKind::Bot;
        return std::shared_ptr<const TypeNode>(t);
    }();
    return n;
}

int compare(const Type& x, const Type& y);

int compare_branches(const Type::Branches& a, const Type::Branches& b) {
    auto i = a.begin();
    auto j = b.begin();
    for (; i != a.end() && j != b.end(); ++i, ++j) {
        if (int c = i->first.compare(j->first)) return c < 0 ? -1 : 1;
        if (int c = compare(i->second, j->second)) return c;
    }
    if (i == a.end() && j == b.end()) return 0;
    return i == a.end() ? -1 : 1;
}

int compare(const Type& x, const Type& y) {
    if (x.kind() != y.kind()) return x.kind() < y.kind() ? -1 : 1;
    switch (x.kind()) {
        case TypeKind::One:
        case TypeKind::Bot:
            return 0;
        case TypeKind::Tensor:
        case TypeKind::Lolli:
            if (int c = compare(x.left(), y.left())) return c;
            return compare(x.right(), y.right());
        case TypeKind::Bang:
        case TypeKind::Query:
            return compare(x.body(), y.body());
        case TypeKind::Plus:
        case TypeKind::With:
            return compare_branches(x.branches(), y.branches());
    }
    return 0;
}

}  // namespace

Type::Type() = default;

Type Type::one() { return Type(); }
Type Type::bot() { return Type(bot_node()); }

Type Type::tensor(Type a, Type b) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TypeKind::Tensor;
    n->a = std::move(a);
    n->b = std::move(b);
    return Type(std::move(n));
}

Type Type::lolli(Type a, Type b) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TypeKind::Lolli;
    n->a = std::move(a);
    n->b = std::move(b);
    return Type(std::move(n));
}

Type Type::par(const Type& a, Type b) { return lolli(dual(a), std::move(b)); }

Type Type::plus(Branches bs) {
    if (bs.empty()) throw std::invalid_argument("empty label set in +{...}");
    auto n = std::make_shared<TypeNode>();
    n->kind = TypeKind::Plus;
    n->branches = std::move(bs);
    return Type(std::move(n));
}

Type Type::with(Branches bs) {
    if (bs.empty()) throw std::invalid_argument("empty label set in &{...}");
    auto n = std::make_shared<TypeNode>();
    n->kind = TypeKind::With;
    n->branches = std::move(bs);
    return Type(std::move(n));
}

Type Type::bang(Type a) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TypeKind::Bang;
    n->a = std::move(a);
    return Type(std::move(n));
}

Type Type::query(Type a) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TypeKind::Query;
    n->a = std::move(a);
    return Type(std::move(n));
}

TypeKind Type::kind() const { return node_ ? node_->kind : TypeKind::One; }
const Type& Type::left() const { return node_->a; }
const Type& Type::right() const { return node_->b; }
const Type& Type::body() const { return node_->a; }
const Type::Branches& Type::branches() const { return node_->branches; }

std::size_t Type::size() const {
    switch (kind()) {
        case TypeKind::One:
        case TypeKind::Bot:
            return 1;
        case TypeKind::Tensor:
        case TypeKind::Lolli:
            return 1 + left().size() + right().size();
        case TypeKind::Bang:
        case TypeKind::Query:
            return 1 + body().size();
        case TypeKind::Plus:
        case TypeKind::With: {
            std::size_t s = 1;
            for (const auto& [l, t] : branches()) s += t.size();
            return s;
        }
    }
    return 1;
}

std::size_t Type::depth() const {
    switch (kind()) {
        case TypeKind::One:
        case TypeKind::Bot:
            return 1;
        case TypeKind::Tensor:
        case TypeKind::Lolli:
            return 1 + std::max(left().depth(), right().depth());
        case TypeKind::Bang:
        case TypeKind::Query:
            return 1 + body().depth();
        case TypeKind::Plus:
        case TypeKind::With: {
            std::size_t d = 0;
            for (const auto& [l, t] : branches()) d = std::max(d, t.depth());
            return 1 + d;
        }
    }
    return 1;
}

bool operator==(const Type& a, const Type& b) {
    if (a.node_ == b.node_) return true;
    return compare(a, b) == 0;
}

bool operator<(const Type& a, const Type& b) { return compare(a, b) < 0; }

Type dual(const Type& t) {
    switch (t.kind()) {
        case TypeKind::One:
            return Type::bot();
        case TypeKind::Bot:
            return Type::one();
        case TypeKind::Tensor:
            return Type::lolli(t.left(), dual(t.right()));
        case TypeKind::Lolli:
            return Type::tensor(t.left(), dual(t.right()));
        case TypeKind::Plus: {
            Type::Branches bs;
            for (const auto& [l, a] : t.branches()) bs.emplace(l, dual(a));
            return Type::with(std::move(bs));
        }
        case TypeKind::With: {
            Type::Branches bs;
            for (const auto& [l, a] : t.branches()) bs.emplace(l, dual(a));
            return Type::plus(std::move(bs));
        }
        case TypeKind::Bang:
            return Type::query(dual(t.body()));
        case TypeKind::Query:
            return Type::bang(dual(t.body()));
    }
    return t;
}

bool in_ill_grammar(const Type& t) {
    switch (t.kind()) {
        case TypeKind::One:
            return true;
        case TypeKind::Bot:
        case TypeKind::Query:
            return false;
        case TypeKind::Tensor:
        case TypeKind::Lolli:
            return in_ill_grammar(t.left()) && in_ill_grammar(t.right());
        case TypeKind::Bang:
            return in_ill_grammar(t.body());
        case TypeKind::Plus:
        case TypeKind::With:
            for (const auto& [l, a] : t.branches())
                if (!in_ill_grammar(a)) return false;
            return true;
    }
    return false;
}

std::vector<Type> subterms(const Type& t) {
    std::vector<Type> out{t};
    switch (t.kind()) {
        case TypeKind::Tensor:
        case TypeKind::Lolli:
            for (auto& s : subterms(t.left())) out.push_back(s);
            for (auto& s : subterms(t.right())) out.push_back(s);
            break;
        case TypeKind::Bang:
        case TypeKind::Query:
            for (auto& s : subterms(t.body())) out.push_back(s);
            break;
        case TypeKind::Plus:
        case TypeKind::With:
            for (const auto& [l, a] : t.branches())
                for (auto& s : subterms(a)) out.push_back(s);
            break;
        default:
            break;
    }
    return out;
}

}  // namespace sf
