#ifndef NOVARCH_NOVARCH_HPP
#define NOVARCH_NOVARCH_HPP

#include "novarch/error.hpp"
#include "novarch/evaluator.hpp"
#include "novarch/novelty.hpp"
#include "novarch/nsga2.hpp"
#include "novarch/rng.hpp"
#include "novarch/search.hpp"
#include "novarch/serialize.hpp"
#include "novarch/space.hpp"
#include "novarch/version.hpp"

#endif
