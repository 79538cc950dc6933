#pragma once

#include "cteam/signature.hpp"
#include "cteam/function_component.hpp"
#include "cteam/team.hpp"
#include "cteam/rng.hpp"
#include "cteam/enumeration.hpp"
#include "cteam/formula.hpp"
#include "cteam/syntax.hpp"
#include "cteam/semantics.hpp"
#include "cteam/charform.hpp"
#include "cteam/resolutions.hpp"
#include "cteam/entailment.hpp"
#include "cteam/random_formula.hpp"
#include "cteam/proofs.hpp"
#include "cteam/derivations.hpp"
#include "cteam/soundness.hpp"
#include "cteam/workspace.hpp"
