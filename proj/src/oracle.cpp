#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "sessionforge/dynamics.hpp"
#include "sessionforge/harness.hpp"
#include "sessionforge/syntax.hpp"

namespace sf {

namespace {

// Processes of an exact size. Binders are named b<k> where k counts the
// binders already in scope, so every alpha class is produced once per
// choice of free names.
class Enumerator {
public:
    explicit Enumerator(const OracleLimits& lim) : lim_(lim) {}

    const std::vector<Process>& of_size(std::size_t n, std::size_t k) {
        auto key = std::make_pair(n, k);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<Process> out;
        std::vector<Name> scope = lim_.free_pool;
        for (std::size_t i = 0; i < k; ++i) scope.push_back("b" + std::to_string(i));
        Name b = "b" + std::to_string(k);
        auto push = [&](Process p) {
            out.push_back(std::move(p));
            if (++total_ > lim_.max_processes * 8)
                throw BudgetOverflow("process enumeration exceeded " + std::to_string(lim_.max_processes));
        };
        if (n == 1) {
            if (lim_.mix) push(Process::inact());
            for (const auto& a : scope) push(Process::close(a));
            for (std::size_t i = 0; i < scope.size(); ++i)
                for (std::size_t j = i + 1; j < scope.size(); ++j) push(Process::fwd(scope[i], scope[j]));
        } else if (n >= 2) {
            for (const auto& a : scope) {
                for (const auto& p : of_size(n - 1, k)) push(Process::wait(a, p));
                for (const auto& p : of_size(n - 1, k + 1)) {
                    if (!uses(p, b)) continue;
                    push(Process::recv(a, b, p));
                    push(Process::server(a, b, p));
                    push(Process::copy(a, b, p));
                }
                for (const auto& l : lim_.labels)
                    for (const auto& p : of_size(n - 1, k)) push(Process::select(a, l, p));
                for (auto& arms : arm_sets(n - 1, k)) push(Process::branch(a, arms));
                for (std::size_t i = 1; i + 1 < n; ++i)
                    for (const auto& p : of_size(i, k + 1))
                        for (const auto& q : of_size(n - 1 - i, k + 1))
                            if (uses(p, b)) push(Process::send(a, b, p, q));
            }
            if (lim_.mix)
                for (std::size_t i = 1; i + 1 < n; ++i)
                    for (const auto& p : of_size(i, k))
                        for (const auto& q : of_size(n - 1 - i, k)) push(Process::par(p, q));
            for (std::size_t i = 1; i + 2 < n; ++i)
                for (const auto& p : of_size(i, k + 1))
                    for (const auto& q : of_size(n - 2 - i, k + 1))
                        if (uses(p, b) || uses(q, b)) push(Process::cut(b, std::nullopt, p, q));
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    const OracleLimits& lim_;

    // Received, served, requested and sent names are linear in the premise,
    // so a binder that is never used cannot be typed.
    static bool uses(const Process& p, const Name& b) { return free_names(p).count(b) > 0; }

    std::map<std::pair<std::size_t, std::size_t>, std::vector<Process>> memo_;
    std::size_t total_ = 0;

    // Arms over the whole label alphabet whose sizes sum to n.
    std::vector<Process::Arms> arm_sets(std::size_t n, std::size_t k) {
        std::vector<Process::Arms> acc = {{}};
        std::vector<std::size_t> used = {0};
        for (const auto& l : lim_.labels) {
            std::vector<Process::Arms> next;
            std::vector<std::size_t> next_used;
            for (std::size_t a = 0; a < acc.size(); ++a)
                for (std::size_t s = 1; used[a] + s <= n; ++s)
                    for (const auto& p : of_size(s, k)) {
                        auto arms = acc[a];
                        arms.emplace(l, p);
                        next.push_back(std::move(arms));
                        next_used.push_back(used[a] + s);
                    }
            acc = std::move(next);
            used = std::move(next_used);
        }
        std::vector<Process::Arms> out;
        for (std::size_t a = 0; a < acc.size(); ++a)
            if (used[a] == n) out.push_back(std::move(acc[a]));
        return out;
    }
};

// Pool names occur in pool order of first appearance in the printed term.
// Pool names are never binders, so every pool token is a free occurrence.
bool canonical_free_names(const Process& p, const std::vector<Name>& pool) {
    std::string text = print_process(p);
    std::size_t next = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (!std::isalnum(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
        std::string tok = text.substr(i, j - i);
        i = j;
        for (std::size_t k = 0; k < pool.size(); ++k)
            if (tok == pool[k]) {
                if (k > next) return false;
                if (k == next) ++next;
            }
    }
    return true;
}

// (type kind, goes right) pairs compatible with one use of a free name as a
// subject. Forwarder endpoints accept anything.
using Shape = std::pair<TypeKind, bool>;
using Shapes = std::set<Shape>;

Shapes shapes_of(const Process& q) {
    switch (q.kind()) {
        case ProcKind::Close: return {{TypeKind::One, true}, {TypeKind::Bot, false}};
        case ProcKind::Wait: return {{TypeKind::Bot, true}, {TypeKind::One, false}};
        case ProcKind::Recv: return {{TypeKind::Lolli, true}, {TypeKind::Tensor, false}};
        case ProcKind::Send:
            if (q.bound_send()) return {{TypeKind::Tensor, true}, {TypeKind::Lolli, false}};
            return {{TypeKind::Query, true}, {TypeKind::Bang, false}};
        case ProcKind::Select: return {{TypeKind::Plus, true}, {TypeKind::With, false}};
        case ProcKind::Branch: return {{TypeKind::With, true}, {TypeKind::Plus, false}};
        case ProcKind::Server: return {{TypeKind::Bang, true}, {TypeKind::Query, false}};
        default: break;
    }
    Shapes all;
    for (auto k : {TypeKind::One, TypeKind::Bot, TypeKind::Tensor, TypeKind::Lolli, TypeKind::Plus,
                   TypeKind::With, TypeKind::Bang, TypeKind::Query})
        for (bool r : {false, true}) all.insert({k, r});
    return all;
}

// Intersection over the outermost uses of n. A linear name's type is fixed by
// its first action, and a name promoted from !A or ?A is only used by
// requests; binders never capture pool names.
void outer_shapes(const Process& q, const Name& n, Shapes& acc) {
    bool subject = false;
    switch (q.kind()) {
        case ProcKind::Forward:
            return;
        case ProcKind::Close:
        case ProcKind::Wait:
        case ProcKind::Recv:
        case ProcKind::Send:
        case ProcKind::Select:
        case ProcKind::Branch:
        case ProcKind::Server:
            subject = q.chan() == n;
            break;
        default:
            break;
    }
    if (subject) {
        Shapes s = shapes_of(q), keep;
        for (const auto& x : acc)
            if (s.count(x)) keep.insert(x);
        acc = std::move(keep);
        return;
    }
    switch (q.kind()) {
        case ProcKind::Inact:
        case ProcKind::Close:
        case ProcKind::Forward:
            return;
        case ProcKind::Branch:
            for (const auto& [l, a] : q.arms()) outer_shapes(a, n, acc);
            return;
        case ProcKind::Par:
        case ProcKind::Restrict:
            outer_shapes(q.first(), n, acc);
            if (q.kind() == ProcKind::Par) outer_shapes(q.second(), n, acc);
            return;
        case ProcKind::Send:
            outer_shapes(q.first(), n, acc);
            if (q.bound_send()) outer_shapes(q.second(), n, acc);
            return;
        default:
            outer_shapes(q.first(), n, acc);
    }
}

}  // namespace

std::vector<Process> enumerate_processes(std::size_t size_bound, const OracleLimits& limits) {
    Enumerator e(limits);
    std::vector<Process> out;
    for (std::size_t n = 1; n <= size_bound; ++n) {
        for (const auto& p : e.of_size(n, 0))
            if (canonical_free_names(p, limits.free_pool)) out.push_back(p);
        if (out.size() > limits.max_processes)
            throw BudgetOverflow("more than " + std::to_string(limits.max_processes) + " processes of size <= " +
                                 std::to_string(size_bound));
    }
    return out;
}

OracleResult exhaustive_oracle(std::size_t size_bound, const std::vector<Type>& universe, System system,
                               const OracleLimits& limits) {
    std::vector<Type> closed;
    auto add = [&](const Type& t) {
        for (const auto& u : closed)
            if (u == t) return;
        closed.push_back(t);
    };
    for (const auto& t : universe) {
        add(t);
        add(dual(t));
    }
    InferenceBudget budget;
    budget.max_steps = limits.infer_steps;
    budget.universe = closed;

    OracleResult r;
    r.processes = enumerate_processes(size_bound, limits);
    for (const auto& p : r.processes) {
        NameSet fn = free_names(p);
        std::vector<Name> names(fn.begin(), fn.end());
        // choice[i]: universe index, and whether the name goes right.
        std::vector<std::pair<std::size_t, bool>> choice(names.size());
        std::vector<Shapes> allowed;
        for (const auto& n : names) {
            Shapes a = shapes_of(Process::inact());
            outer_shapes(p, n, a);
            allowed.push_back(std::move(a));
        }
        bool any = false;
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i < names.size()) {
                for (std::size_t t = 0; t < closed.size(); ++t)
                    for (bool right : {false, true}) {
                        if (right && system == System::CLL) continue;
                        // The one-sided region reads like the right region.
                        bool as_right = right || system == System::CLL;
                        if (!allowed[i].count({closed[t].kind(), as_right})) continue;
                        choice[i] = {t, right};
                        go(i + 1);
                    }
                return;
            }
            Judgment j;
            j.system = system;
            j.process = p;
            for (std::size_t k = 0; k < names.size(); ++k)
                (choice[k].second ? j.lambda : j.delta).add(names[k], closed[choice[k].first]);
            if (system == System::ILL && j.lambda.size() != 1) return;
            if (!judgment_problem(j).empty()) return;
            if (std::holds_alternative<Derivation>(infer(j, budget))) {
                any = true;
                r.typable.push_back({p, j});
            }
        };
        go(0);
        if (any) r.typable_keys.push_back(alpha_key(p));
    }
    return r;
}

}  // namespace sf
