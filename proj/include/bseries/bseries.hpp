#ifndef BSERIES_BSERIES_HPP
#define BSERIES_BSERIES_HPP

#include "scalar.hpp"
#include "series.hpp"
#include "trees.hpp"
#include "butcher.hpp"
#include "polynomial.hpp"
#include "exppoly.hpp"
#include "words.hpp"
#include "vectorfields.hpp"
#include "extended.hpp"
#include "splitting.hpp"
#include "integrators.hpp"
#include "io.hpp"
#include "experiments.hpp"

#endif // BSERIES_BSERIES_HPP
