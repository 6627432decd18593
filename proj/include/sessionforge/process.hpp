#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "sessionforge/types.hpp"

namespace sf {

using Name = std::string;
using NameSet = std::set<Name>;

enum class ProcKind {
    Inact,
    Restrict,
    Par,
    Send,     // bound send (two continuations) or copy shape (one)
    Recv,
    Select,
    Branch,
    Server,
    Forward,
    Close,    // x[].0
    Wait,     // x().P
};

struct ProcNode;

// Immutable process term. Binders: Restrict binds its name in the body,
// Send binds the payload in every continuation, Recv and Server bind their binder.
class Process {
public:
    using Arms = std::map<std::string, Process>;

    Process();  // 0

    static Process inact();
    static Process restrict(Name x, std::optional<Type> ann, Process body);
    static Process cut(Name x, std::optional<Type> ann, Process l, Process r);
    static Process par(Process l, Process r);
    static Process send(Name x, Name y, Process l, Process r);  // new y x<y>.(l | r)
    static Process copy(Name u, Name y, Process body);           // new y u<y>.body
    static Process recv(Name x, Name y, Process body);
    static Process select(Name x, std::string label, Process body);
    static Process branch(Name x, Arms arms);
    static Process server(Name x, Name y, Process body);
    static Process fwd(Name x, Name y);
    static Process close(Name x);
    static Process wait(Name x, Process body);

    ProcKind kind() const;
    bool is(ProcKind k) const { return kind() == k; }

    // Channel / subject. Restrict: bound name. Forward: left endpoint.
    const Name& chan() const;
    // Binder of Send/Recv/Server, right endpoint of Forward, label of Select.
    const Name& name2() const;
    const Name& binder() const { return name2(); }
    const std::string& label() const { return name2(); }
    const std::optional<Type>& ann() const;
    // Continuation(s). Par: left/right. Restrict: body in first().
    const Process& first() const;
    const Process& second() const;
    const Process& body() const { return first(); }
    bool bound_send() const;  // Send with two continuations
    bool copy_send() const;   // Send with one continuation
    const Arms& arms() const;

    // Restrict whose body is a Par.
    bool is_cut() const;

    std::size_t size() const;

    friend bool operator==(const Process& a, const Process& b);
    friend bool operator!=(const Process& a, const Process& b) { return !(a == b); }

private:
    explicit Process(std::shared_ptr<const ProcNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ProcNode> node_;  // null means 0
};

struct ProcNode {
    ProcKind kind = ProcKind::Inact;
    Name x, y;
    std::optional<Type> ann;
    Process p, q;
    bool two = false;
    Process::Arms arms;
};

NameSet free_names(const Process& p);
NameSet bound_names(const Process& p);
NameSet all_names(const Process& p);

// First name of the form base or base_N not in avoid. Any trailing _N on
// the base is stripped first.
Name fresh_name(const Name& base, const NameSet& avoid);

// p{replacement/target}: capture-avoiding.
Process substitute(const Process& p, const Name& replacement, const Name& target);

bool alpha_eq(const Process& p, const Process& q);

// Renames every binder to a name distinct from all other binders and from
// the free names.
Process barendregt(const Process& p);

// Replaces the binder of a Send/Recv/Server node at the root.
Process rename_binder(const Process& p, const Name& fresh);

}  // namespace sf
