#ifndef STRUCTID_STRUCTID_HPP
#define STRUCTID_STRUCTID_HPP

#include "structid/analyzer.hpp"
#include "structid/diffpoly.hpp"
#include "structid/diffvar.hpp"
#include "structid/groebner.hpp"
#include "structid/linalg.hpp"
#include "structid/model.hpp"
#include "structid/numeric.hpp"
#include "structid/parser.hpp"
#include "structid/poly.hpp"
#include "structid/prolongation.hpp"
#include "structid/randomize.hpp"

#endif  // STRUCTID_STRUCTID_HPP
