#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cteam {

using VarId = std::uint16_t;
using ValId = std::uint16_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return s != "_T_";
}

// A finite ordered domain of variables with finite ordered ranges. Variables
// and values are referred to by their position; names are kept for I/O.
class Signature {
 public:
  struct Variable {
    std::string name;
    std::vector<std::string> range;
  };

  explicit Signature(std::vector<Variable> vars) : vars_(std::move(vars)) {
    if (vars_.empty()) throw Error("signature: empty domain");
    if (vars_.size() > 64) throw Error("signature: more than 64 variables");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const auto& v = vars_[i];
      if (!is_identifier(v.name))
        throw Error("signature: invalid variable name '" + v.name + "'");
      if (!index_.emplace(v.name, static_cast<VarId>(i)).second)
        throw Error("signature: duplicate variable '" + v.name + "'");
      if (v.range.empty())
        throw Error("signature: empty range for '" + v.name + "'");
      if (v.range.size() > 0xFFFF)
        throw Error("signature: range too large for '" + v.name + "'");
      std::map<std::string, ValId, std::less<>> vals;
      for (std::size_t j = 0; j < v.range.size(); ++j) {
        if (!is_identifier(v.range[j]))
          throw Error("signature: invalid value '" + v.range[j] + "'");
        if (!vals.emplace(v.range[j], static_cast<ValId>(j)).second)
          throw Error("signature: duplicate value '" + v.range[j] + "' for '" +
                      v.name + "'");
      }
      value_index_.push_back(std::move(vals));
    }
    long double total = 1;
    for (const auto& v : vars_) total *= static_cast<long double>(v.range.size());
    if (total > 9.0e18L) throw Error("signature: too many assignments");
  }

  std::size_t size() const { return vars_.size(); }
  const std::string& name(VarId v) const { return vars_.at(v).name; }
  const std::vector<std::string>& range(VarId v) const { return vars_.at(v).range; }
  std::size_t range_size(VarId v) const { return vars_.at(v).range.size(); }
  const std::string& value_name(VarId v, ValId x) const { return vars_.at(v).range.at(x); }
  const std::vector<Variable>& variables() const { return vars_; }

  std::optional<VarId> find_var(std::string_view n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<ValId> find_value(VarId v, std::string_view n) const {
    const auto& m = value_index_.at(v);
    auto it = m.find(n);
    if (it == m.end()) return std::nullopt;
    return it->second;
  }
  VarId var(std::string_view n) const {
    if (auto v = find_var(n)) return *v;
    throw Error("unknown variable '" + std::string(n) + "'");
  }
  ValId value(VarId v, std::string_view n) const {
    if (auto x = find_value(v, n)) return *x;
    throw Error("value '" + std::string(n) + "' is not in the range of '" + name(v) + "'");
  }

  std::uint64_t assignment_count() const {
    std::uint64_t n = 1;
    for (const auto& v : vars_) n *= v.range.size();
    return n;
  }

  friend bool operator==(const Signature& a, const Signature& b) {
    if (&a == &b) return true;
    if (a.vars_.size() != b.vars_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i)
      if (a.vars_[i].name != b.vars_[i].name || a.vars_[i].range != b.vars_[i].range)
        return false;
    return true;
  }

 private:
  std::vector<Variable> vars_;
  std::map<std::string, VarId, std::less<>> index_;
  std::vector<std::map<std::string, ValId, std::less<>>> value_index_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

inline SignaturePtr make_signature(std::vector<Signature::Variable> vars) {
  return std::make_shared<const Signature>(std::move(vars));
}

inline void require_same(const Signature& a, const Signature& b) {
  if (!(a == b)) throw Error("signature mismatch");
}

// Total map from the signature's variables to values, stored positionally.
// The lexicographic order on value vectors is the enumeration order of all
// assignments (first variable most significant).
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<ValId> values) : values_(std::move(values)) {}

  ValId operator[](VarId v) const { return values_[v]; }
  std::size_t size() const { return values_.size(); }
  const std::vector<ValId>& values() const { return values_; }

  Assignment with(VarId v, ValId x) const {
    Assignment r = *this;
    r.values_.at(v) = x;
    return r;
  }

  friend auto operator<=>(const Assignment&, const Assignment&) = default;
  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<ValId> values_;
};

inline void validate(const Signature& sig, const Assignment& s) {
  if (s.size() != sig.size()) throw Error("assignment does not cover the domain");
  for (std::size_t v = 0; v < sig.size(); ++v)
    if (s[static_cast<VarId>(v)] >= sig.range_size(static_cast<VarId>(v)))
      throw Error("assignment value out of range for '" + sig.name(static_cast<VarId>(v)) + "'");
}

// Mixed-radix index of s in the enumeration of all assignments.
inline std::uint64_t assignment_code(const Signature& sig, const Assignment& s) {
  std::uint64_t c = 0;
  for (std::size_t v = 0; v < sig.size(); ++v)
    c = c * sig.range_size(static_cast<VarId>(v)) + s[static_cast<VarId>(v)];
  return c;
}

inline Assignment assignment_from_code(const Signature& sig, std::uint64_t c) {
  std::vector<ValId> vals(sig.size());
  for (std::size_t i = sig.size(); i-- > 0;) {
    auto r = sig.range_size(static_cast<VarId>(i));
    vals[i] = static_cast<ValId>(c % r);
    c /= r;
  }
  return Assignment(std::move(vals));
}

inline std::string format_assignment(const Signature& sig, const Assignment& s) {
  std::string out = "(";
  for (std::size_t v = 0; v < sig.size(); ++v) {
    if (v) out += ",";
    out += sig.name(static_cast<VarId>(v)) + "=" +
           sig.value_name(static_cast<VarId>(v), s[static_cast<VarId>(v)]);
  }
  return out + ")";
}

struct Equation {
  VarId var;
  ValId val;
  friend auto operator<=>(const Equation&, const Equation&) = default;
  friend bool operator==(const Equation&, const Equation&) = default;
};

// Counterfactual antecedent X1=x1 /\ ... /\ Xn=xn in stored order; repeats allowed.
using EquationSeq = std::vector<Equation>;

inline bool eq_consistent(const EquationSeq& eqs) {
  for (std::size_t i = 0; i < eqs.size(); ++i)
    for (std::size_t j = i + 1; j < eqs.size(); ++j)
      if (eqs[i].var == eqs[j].var && eqs[i].val != eqs[j].val) return false;
  return true;
}

inline std::vector<VarId> eq_vars(const EquationSeq& eqs) {
  std::vector<VarId> out;
  for (const auto& e : eqs)
    if (std::find(out.begin(), out.end(), e.var) == out.end()) out.push_back(e.var);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cteam
