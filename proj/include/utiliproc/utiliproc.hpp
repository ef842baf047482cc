#pragma once

// Umbrella header.

#include "utiliproc/action.hpp"
#include "utiliproc/context.hpp"
#include "utiliproc/diagnostics.hpp"
#include "utiliproc/equivalence.hpp"
#include "utiliproc/formula.hpp"
#include "utiliproc/laws.hpp"
#include "utiliproc/logic.hpp"
#include "utiliproc/model.hpp"
#include "utiliproc/modification.hpp"
#include "utiliproc/number.hpp"
#include "utiliproc/parser.hpp"
#include "utiliproc/printer.hpp"
#include "utiliproc/resource.hpp"
#include "utiliproc/runner.hpp"
#include "utiliproc/semantics.hpp"
#include "utiliproc/term.hpp"
#include "utiliproc/trust.hpp"
#include "utiliproc/universe.hpp"
#include "utiliproc/validate.hpp"
