#pragma once

#include "nmfib/boolfun.hpp"
#include "nmfib/calculus.hpp"
#include "nmfib/catalog.hpp"
#include "nmfib/fibring.hpp"
#include "nmfib/io.hpp"
#include "nmfib/matrix_ops.hpp"
#include "nmfib/semantics.hpp"
#include "nmfib/syntax.hpp"
