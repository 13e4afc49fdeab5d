#ifndef CARLITZ_CARLITZ_HPP
#define CARLITZ_CARLITZ_HPP

// umbrella header

#include "carlitz/anderson.hpp"
#include "carlitz/cyclotomic.hpp"
#include "carlitz/errors.hpp"
#include "carlitz/finite_module.hpp"
#include "carlitz/frac.hpp"
#include "carlitz/gf.hpp"
#include "carlitz/io.hpp"
#include "carlitz/kelem.hpp"
#include "carlitz/laurent.hpp"
#include "carlitz/lseries.hpp"
#include "carlitz/matrix.hpp"
#include "carlitz/primes.hpp"
#include "carlitz/skew.hpp"
#include "carlitz/theta.hpp"

#endif
