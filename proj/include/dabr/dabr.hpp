#pragma once

#include "dabr/core.hpp"
#include "dabr/error.hpp"
#include "dabr/merge.hpp"
#include "dabr/oracle.hpp"
#include "dabr/penalty.hpp"
#include "dabr/solver.hpp"
#include "dabr/sweep.hpp"
