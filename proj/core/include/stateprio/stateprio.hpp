#pragma once

// Convenience header pulling in the whole library.
#include "stateprio/encoder.hpp"
#include "stateprio/error.hpp"
#include "stateprio/expr.hpp"
#include "stateprio/model.hpp"
#include "stateprio/parser.hpp"
#include "stateprio/report.hpp"
#include "stateprio/semantics.hpp"
#include "stateprio/smt.hpp"
#include "stateprio/solver.hpp"
#include "stateprio/synthesis.hpp"
#include "stateprio/transform.hpp"
#include "stateprio/value.hpp"
