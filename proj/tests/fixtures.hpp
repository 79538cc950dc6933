#pragma once

#include <string>

#include "oracles.hpp"

namespace fixture {

using namespace cteam;

inline SignaturePtr binary_sig(std::size_t n) {
  std::vector<Signature::Variable> vs;
  const char* names[] = {"A", "B", "C", "D", "E"};
  for (std::size_t i = 0; i < n; ++i) vs.push_back({names[i], {"0", "1"}});
  return make_signature(vs);
}

// Running sample: U, X in {0,1}, Y in {1,2}, Z in {2..6};
// F_X(U) = U, F_Y(X) = X+1, F_Z(U,X,Y) = 2Y+X+U.
struct Sample {
  SignaturePtr sig;
  FunctionComponent fc;
  CausalTeam team;
  VarId U = 0, X = 1, Y = 2, Z = 3;

  // Values are stored by position; Y's value "1" has index 0, Z's "2" index 0.
  Assignment row(int u, int x, int y, int z) const {
    return Assignment({static_cast<ValId>(u), static_cast<ValId>(x), static_cast<ValId>(y - 1),
                       static_cast<ValId>(z - 2)});
  }
};

inline Sample sample() {
  auto sig = make_signature({{"U", {"0", "1"}}, {"X", {"0", "1"}}, {"Y", {"1", "2"}},
                             {"Z", {"2", "3", "4", "5", "6"}}});
  FunctionComponent::Slots slots(4);
  slots[1] = Mechanism{{0}, {0, 1}};
  slots[2] = Mechanism{{1}, {0, 1}};
  Mechanism z{{0, 1, 2}, {}};
  for (int u = 0; u < 2; ++u)
    for (int x = 0; x < 2; ++x)
      for (int yi = 0; yi < 2; ++yi) z.table.push_back(static_cast<ValId>(2 * (yi + 1) + x + u - 2));
  slots[3] = z;
  FunctionComponent f(sig, slots);
  Sample e{sig, f, CausalTeam(f, {}), 0, 1, 2, 3};
  e.team = CausalTeam(f, {e.row(0, 0, 1, 2), e.row(1, 1, 2, 6)});
  return e;
}

inline std::string data_path(const std::string& rel) { return std::string(CTEAM_DATA_DIR) + "/" + rel; }

// Every causal team over sig, from the brute-force function components.
inline std::vector<oracle::Team> all_cts(const SignaturePtr& sig, std::size_t max_rows = 64) {
  std::vector<oracle::Team> out;
  for (const auto& f : oracle::all_fcs(sig)) {
    auto rows = oracle::compatible_rows(f);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << rows.size()); ++m) {
      if (static_cast<std::size_t>(__builtin_popcountll(m)) > max_rows) continue;
      oracle::Team t;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (m >> i & 1) t.push_back({rows[i], f});
      out.push_back(t);
    }
  }
  return out;
}

inline std::vector<Member> all_sem(const SignaturePtr& sig) {
  std::vector<Member> out;
  for (const auto& f : oracle::all_fcs(sig))
    for (const auto& s : oracle::compatible_rows(f)) out.push_back({s, f});
  return out;
}

inline CausalTeam random_ct(const SignaturePtr& sig, CounterRng& rng, std::size_t max_rows = 6) {
  FunctionComponent f = random_function_component(sig, rng);
  std::vector<Assignment> rows;
  std::size_t k = rng.below(max_rows + 1);
  for (std::size_t i = 0; i < k; ++i) rows.push_back(random_compatible(f, rng));
  return CausalTeam(f, rows);
}

inline GeneralizedCausalTeam random_gct(const SignaturePtr& sig, CounterRng& rng, std::size_t max_members = 6,
                                        std::size_t fc_pool = 2) {
  std::vector<FunctionComponent> pool;
  for (std::size_t i = 0; i < fc_pool; ++i) pool.push_back(random_function_component(sig, rng));
  std::vector<Member> ms;
  std::size_t k = rng.below(max_members + 1);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& f = pool[rng.below(pool.size())];
    ms.push_back({random_compatible(f, rng), f});
  }
  return GeneralizedCausalTeam(sig, ms);
}

// Random signature with 1..3 variables and ranges 1..3.
inline SignaturePtr random_sig(CounterRng& rng) {
  std::size_t n = 1 + rng.below(3);
  std::vector<Signature::Variable> vs;
  const char* names[] = {"A", "B", "C"};
  for (std::size_t i = 0; i < n; ++i) {
    Signature::Variable v{names[i], {}};
    std::size_t r = 1 + rng.below(3);
    for (std::size_t j = 0; j < r; ++j) v.range.push_back(std::to_string(j));
    vs.push_back(v);
  }
  return make_signature(vs);
}

}  // namespace fixture
