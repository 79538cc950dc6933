#pragma once

#include <fstream>
#include <sstream>

#include "cteam/derivations.hpp"
#include "cteam/team.hpp"

namespace cteam {

// Workspace text format (newline-delimited blocks, '#' starts a comment):
//
//   signature
//     U: 0 1
//     Y: 1 2
//   end
//   fc F
//     Y <- U          parents in signature order; "Y <-" for a constant
//       0 -> 1        one row per parent valuation
//       1 -> 2
//   end
//   team T ct F       rows are value lists in signature order
//     0 1
//   end
//   team G gct        members are "FC : values"
//     F : 0 1
//   end
struct Workspace {
  SignaturePtr sig;
  std::vector<std::pair<std::string, FunctionComponent>> fcs;
  std::vector<std::pair<std::string, Team>> teams;

  const FunctionComponent* find_fc(std::string_view name) const {
    for (const auto& [n, f] : fcs)
      if (n == name) return &f;
    return nullptr;
  }
  const Team* find_team(std::string_view name) const {
    for (const auto& [n, t] : teams)
      if (n == name) return &t;
    return nullptr;
  }

  // Name of an fc equal to f, registering it under a fresh name if absent.
  std::string name_for(const FunctionComponent& f, const std::string& base = "F") {
    for (const auto& [n, g] : fcs)
      if (g == f) return n;
    std::string name = base;
    for (int k = 1; find_fc(name); ++k) name = base + "_" + std::to_string(k);
    fcs.emplace_back(name, f);
    return name;
  }

  void add_team(const std::string& name, Team t, const std::string& fc_base = "F") {
    if (auto* ct = std::get_if<CausalTeam>(&t)) name_for(ct->fc(), fc_base);
    else
      for (const auto& m : std::get<GeneralizedCausalTeam>(t).members()) name_for(m.fc, fc_base);
    for (auto& [n, old] : teams)
      if (n == name) {
        old = std::move(t);
        return;
      }
    teams.emplace_back(name, std::move(t));
  }
};

namespace detail {

using Line = std::pair<std::size_t, std::string>;

inline Assignment parse_values(const Signature& sig, const std::vector<std::string>& ws, std::size_t line) {
  if (ws.size() != sig.size())
    throw Error(line_error(line, "expected " + std::to_string(sig.size()) + " values, got " + std::to_string(ws.size())));
  std::vector<ValId> vals;
  for (std::size_t v = 0; v < ws.size(); ++v) {
    auto x = sig.find_value(static_cast<VarId>(v), ws[v]);
    if (!x) throw Error(line_error(line, "'" + ws[v] + "' is not a value of " + sig.name(static_cast<VarId>(v))));
    vals.push_back(*x);
  }
  return Assignment(std::move(vals));
}

inline FunctionComponent parse_fc(const SignaturePtr& sig, const std::vector<Line>& body, std::size_t start) {
  const Signature& s = *sig;
  FunctionComponent::Slots slots(s.size());
  std::optional<VarId> cur;
  std::vector<std::optional<ValId>> table;
  std::size_t cur_line = start;
  auto flush = [&] {
    if (!cur) return;
    Mechanism& m = *slots[*cur];
    for (std::size_t i = 0; i < table.size(); ++i)
      if (!table[i])
        throw Error(line_error(cur_line, "mechanism for " + s.name(*cur) + " is missing row " + std::to_string(i + 1) +
                                             " of " + std::to_string(table.size())));
    for (auto& x : table) m.table.push_back(*x);
    cur.reset();
  };
  for (const auto& [no, text] : body) {
    auto arrow_left = text.find("<-");
    if (arrow_left != std::string::npos) {
      flush();
      std::string name = trim(text.substr(0, arrow_left));
      auto v = s.find_var(name);
      if (!v) throw Error(line_error(no, "unknown variable '" + name + "'"));
      if (slots[*v]) throw Error(line_error(no, "second mechanism for " + name));
      Mechanism m;
      for (const auto& p : words(text.substr(arrow_left + 2))) {
        auto pv = s.find_var(p);
        if (!pv) throw Error(line_error(no, "unknown parent '" + p + "'"));
        if (!m.parents.empty() && *pv <= m.parents.back())
          throw Error(line_error(no, "parents must be distinct and listed in signature order"));
        if (*pv == *v) throw Error(line_error(no, name + " cannot be its own parent"));
        m.parents.push_back(*pv);
      }
      std::size_t rows = 1;
      for (auto p : m.parents) rows *= s.range_size(p);
      slots[*v] = std::move(m);
      cur = *v;
      cur_line = no;
      table.assign(rows, std::nullopt);
      continue;
    }
    auto arrow = text.find("->");
    if (arrow == std::string::npos) throw Error(line_error(no, "expected 'V <- parents' or 'values -> value'"));
    if (!cur) throw Error(line_error(no, "table row before any 'V <- parents' line"));
    const Mechanism& m = *slots[*cur];
    auto in = words(text.substr(0, arrow));
    auto out = words(text.substr(arrow + 2));
    if (in.size() != m.parents.size()) throw Error(line_error(no, "row has the wrong number of parent values"));
    if (out.size() != 1) throw Error(line_error(no, "row needs exactly one output value"));
    std::size_t idx = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      auto x = s.find_value(m.parents[i], in[i]);
      if (!x) throw Error(line_error(no, "'" + in[i] + "' is not a value of " + s.name(m.parents[i])));
      idx = idx * s.range_size(m.parents[i]) + *x;
    }
    auto y = s.find_value(*cur, out[0]);
    if (!y) throw Error(line_error(no, "'" + out[0] + "' is not a value of " + s.name(*cur)));
    if (table[idx]) throw Error(line_error(no, "duplicate row"));
    table[idx] = *y;
  }
  flush();
  try {
    return FunctionComponent(sig, std::move(slots));
  } catch (const Error& e) {
    throw Error(line_error(start, e.what()));
  }
}

}  // namespace detail

inline Workspace read_workspace(std::istream& in) {
  std::vector<detail::Line> lines;
  {
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
      ++no;
      auto hash = raw.find('#');
      std::string t = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (!t.empty()) lines.emplace_back(no, t);
    }
  }
  Workspace ws;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto [no, text] = lines[i];
    auto head = detail::words(text);
    std::vector<detail::Line> body;
    std::size_t j = i + 1;
    for (; j < lines.size() && lines[j].second != "end"; ++j) body.push_back(lines[j]);
    if (j == lines.size()) throw Error(detail::line_error(no, "block '" + head[0] + "' has no 'end'"));
    i = j;
    if (head[0] == "signature") {
      if (ws.sig) throw Error(detail::line_error(no, "second signature block"));
      ws.sig = signature_from_lines(body);
      continue;
    }
    if (!ws.sig) throw Error(detail::line_error(no, "the signature block must come first"));
    if (head[0] == "fc") {
      if (head.size() != 2) throw Error(detail::line_error(no, "expected 'fc NAME'"));
      if (ws.find_fc(head[1])) throw Error(detail::line_error(no, "duplicate fc name '" + head[1] + "'"));
      ws.fcs.emplace_back(head[1], detail::parse_fc(ws.sig, body, no));
    } else if (head[0] == "team") {
      if (head.size() < 3) throw Error(detail::line_error(no, "expected 'team NAME ct FC' or 'team NAME gct'"));
      if (ws.find_team(head[1])) throw Error(detail::line_error(no, "duplicate team name '" + head[1] + "'"));
      if (head[2] == "ct") {
        if (head.size() != 4) throw Error(detail::line_error(no, "expected 'team NAME ct FC'"));
        const FunctionComponent* f = ws.find_fc(head[3]);
        if (!f) throw Error(detail::line_error(no, "unknown fc '" + head[3] + "'"));
        std::vector<Assignment> rows;
        for (const auto& [bno, btext] : body) {
          rows.push_back(detail::parse_values(*ws.sig, detail::words(btext), bno));
          if (!compatible(rows.back(), *f))
            throw Error(detail::line_error(bno, "row is not compatible with fc " + head[3]));
        }
        ws.teams.emplace_back(head[1], CausalTeam(*f, std::move(rows)));
      } else if (head[2] == "gct") {
        if (head.size() != 3) throw Error(detail::line_error(no, "expected 'team NAME gct'"));
        std::vector<Member> ms;
        for (const auto& [bno, btext] : body) {
          auto colon = btext.find(':');
          if (colon == std::string::npos) throw Error(detail::line_error(bno, "expected 'FC : values'"));
          std::string fname = detail::trim(btext.substr(0, colon));
          const FunctionComponent* f = ws.find_fc(fname);
          if (!f) throw Error(detail::line_error(bno, "unknown fc '" + fname + "'"));
          Assignment s = detail::parse_values(*ws.sig, detail::words(btext.substr(colon + 1)), bno);
          if (!compatible(s, *f)) throw Error(detail::line_error(bno, "assignment is not compatible with fc " + fname));
          ms.push_back({std::move(s), *f});
        }
        ws.teams.emplace_back(head[1], GeneralizedCausalTeam(ws.sig, std::move(ms)));
      } else {
        throw Error(detail::line_error(no, "team kind must be ct or gct"));
      }
    } else {
      throw Error(detail::line_error(no, "unknown block '" + head[0] + "'"));
    }
  }
  if (!ws.sig) throw Error("workspace has no signature block");
  return ws;
}

inline Workspace read_workspace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_workspace(in);
}

inline Workspace read_workspace_string(const std::string& text) {
  std::istringstream in(text);
  return read_workspace(in);
}

namespace detail {

inline std::string values_text(const Signature& sig, const Assignment& s) {
  std::string out;
  for (std::size_t v = 0; v < sig.size(); ++v) {
    if (v) out += ' ';
    out += sig.value_name(static_cast<VarId>(v), s[static_cast<VarId>(v)]);
  }
  return out;
}

}  // namespace detail

inline void write_fc(std::ostream& out, const std::string& name, const FunctionComponent& f) {
  const Signature& s = f.signature();
  out << "fc " << name << '\n';
  for (auto v : f.endogenous_vars()) {
    const Mechanism& m = *f.mechanism(v);
    out << "  " << s.name(v) << " <-";
    for (auto p : m.parents) out << ' ' << s.name(p);
    out << '\n';
    for (std::size_t i = 0; i < m.table.size(); ++i) {
      std::vector<ValId> in(m.parents.size());
      std::size_t code = i;
      for (std::size_t k = m.parents.size(); k-- > 0;) {
        in[k] = static_cast<ValId>(code % s.range_size(m.parents[k]));
        code /= s.range_size(m.parents[k]);
      }
      out << "   ";
      for (std::size_t k = 0; k < in.size(); ++k) out << ' ' << s.value_name(m.parents[k], in[k]);
      out << " -> " << s.value_name(v, m.table[i]) << '\n';
    }
  }
  out << "end\n";
}

inline void write_workspace(std::ostream& out, Workspace ws) {
  write_signature_block(out, *ws.sig);
  // Register every fc a team refers to before emitting fc blocks.
  for (const auto& [n, t] : ws.teams) {
    if (auto* ct = std::get_if<CausalTeam>(&t)) ws.name_for(ct->fc());
    else
      for (const auto& m : std::get<GeneralizedCausalTeam>(t).members()) ws.name_for(m.fc);
  }
  for (const auto& [n, f] : ws.fcs) {
    out << '\n';
    write_fc(out, n, f);
  }
  for (const auto& [n, t] : ws.teams) {
    out << '\n';
    if (auto* ct = std::get_if<CausalTeam>(&t)) {
      out << "team " << n << " ct " << ws.name_for(ct->fc()) << '\n';
      for (const auto& r : ct->rows()) out << "  " << detail::values_text(*ws.sig, r) << '\n';
    } else {
      out << "team " << n << " gct\n";
      for (const auto& m : std::get<GeneralizedCausalTeam>(t).members())
        out << "  " << ws.name_for(m.fc) << " : " << detail::values_text(*ws.sig, m.assignment) << '\n';
    }
    out << "end\n";
  }
}

inline std::string workspace_text(const Workspace& ws) {
  std::ostringstream out;
  write_workspace(out, ws);
  return out.str();
}

// Human-readable row table with the function component's graph.
inline std::string format_table(const Team& t, const Signature& sig) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header;
  bool gct = std::holds_alternative<GeneralizedCausalTeam>(t);
  std::vector<std::pair<Assignment, const FunctionComponent*>> rows;
  if (auto* ct = std::get_if<CausalTeam>(&t))
    for (const auto& r : ct->rows()) rows.emplace_back(r, &ct->fc());
  else
    for (const auto& m : std::get<GeneralizedCausalTeam>(t).members()) rows.emplace_back(m.assignment, &m.fc);
  for (std::size_t v = 0; v < sig.size(); ++v) header.push_back(sig.name(static_cast<VarId>(v)));
  std::vector<const FunctionComponent*> distinct;
  for (const auto& [s, f] : rows) {
    std::vector<std::string> line;
    for (std::size_t v = 0; v < sig.size(); ++v) line.push_back(sig.value_name(static_cast<VarId>(v), s[static_cast<VarId>(v)]));
    std::size_t k = 0;
    while (k < distinct.size() && !(*distinct[k] == *f)) ++k;
    if (k == distinct.size()) distinct.push_back(f);
    if (gct) line.push_back("F" + std::to_string(k + 1));
    cells.push_back(std::move(line));
  }
  if (gct) header.push_back("fc");
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& l : cells) width[c] = std::max(width[c], l[c].size());
  }
  std::ostringstream out;
  auto row = [&](const std::vector<std::string>& l) {
    out << '|';
    for (std::size_t c = 0; c < l.size(); ++c) out << ' ' << std::string(width[c] - l[c].size(), ' ') << l[c] << " |";
    out << '\n';
  };
  auto rule = [&] {
    out << '+';
    for (auto w : width) out << std::string(w + 2, '-') << '+';
    out << '\n';
  };
  rule();
  row(header);
  rule();
  for (const auto& l : cells) row(l);
  rule();
  if (!gct && distinct.empty())
    if (auto* ct = std::get_if<CausalTeam>(&t)) distinct.push_back(&ct->fc());
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    out << (gct ? "F" + std::to_string(k + 1) + ": " : "graph: ");
    bool any = false;
    for (auto v : distinct[k]->endogenous_vars()) {
      const Mechanism& m = *distinct[k]->mechanism(v);
      out << (any ? "; " : "");
      any = true;
      for (std::size_t i = 0; i < m.parents.size(); ++i) out << (i ? "," : "") << sig.name(m.parents[i]);
      out << (m.parents.empty() ? "const" : "") << " -> " << sig.name(v);
    }
    if (!any) out << "all variables exogenous";
    out << '\n';
  }
  return out.str();
}

}  // namespace cteam
