#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sf {

enum class TypeKind { One, Bot, Tensor, Lolli, Plus, With, Bang, Query };

struct TypeNode;

// Immutable session type. Copies share structure.
class Type {
public:
    using Branches = std::map<std::string, Type>;

    Type();  // One

    static Type one();
    static Type bot();
    static Type tensor(Type a, Type b);
    static Type lolli(Type a, Type b);
    static Type par(const Type& a, Type b);  // sugar: dual(a) -o b
    static Type plus(Branches bs);
    static Type with(Branches bs);
    static Type bang(Type a);
    static Type query(Type a);

    TypeKind kind() const;
    const Type& left() const;
    const Type& right() const;
    const Type& body() const;
    const Branches& branches() const;

    bool is(TypeKind k) const { return kind() == k; }
    std::size_t size() const;
    std::size_t depth() const;

    friend bool operator==(const Type& a, const Type& b);
    friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
    friend bool operator<(const Type& a, const Type& b);

private:
    explicit Type(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const TypeNode> node_;  // null means One
};

struct TypeNode {
    TypeKind kind = TypeKind::One;
    Type a, b;
    Type::Branches branches;
};

Type dual(const Type& t);

// No Bot and no Query anywhere.
bool in_ill_grammar(const Type& t);

std::vector<Type> subterms(const Type& t);

}  // namespace sf
