/// @file   dsl.hpp
/// @brief  Umbrella header for the relational script language

#pragma once

#include "relctl/dsl/ast.hpp"
#include "relctl/dsl/check.hpp"
#include "relctl/dsl/eval.hpp"
#include "relctl/dsl/parser.hpp"
