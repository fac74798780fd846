#pragma once

#include "krsol/rational.hpp"
#include "krsol/quadratic.hpp"
#include "krsol/poly.hpp"
#include "krsol/exact_matrix.hpp"
#include "krsol/params.hpp"
#include "krsol/symalg.hpp"
#include "krsol/coneinv.hpp"
#include "krsol/jet.hpp"
#include "krsol/curvature.hpp"
#include "krsol/chartmetric.hpp"
#include "krsol/flatmodel.hpp"
#include "krsol/chartscan.hpp"
#include "krsol/potential.hpp"
#include "krsol/identities.hpp"
#include "krsol/config.hpp"
#include "krsol/runner.hpp"
