#pragma once

#include "critters/lang/ast.hpp"
#include "critters/lang/interpreter.hpp"
#include "critters/lang/parser.hpp"
#include "critters/lang/printer.hpp"
#include "critters/lang/validate.hpp"
