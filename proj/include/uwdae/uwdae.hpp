#ifndef UWDAE_UWDAE_HPP
#define UWDAE_UWDAE_HPP

#include "uwdae/affine.hpp"
#include "uwdae/assembly.hpp"
#include "uwdae/bench.hpp"
#include "uwdae/detailed.hpp"
#include "uwdae/errors.hpp"
#include "uwdae/homogenize.hpp"
#include "uwdae/kernel.hpp"
#include "uwdae/parallel.hpp"
#include "uwdae/pencil.hpp"
#include "uwdae/quadrature.hpp"
#include "uwdae/rbm.hpp"
#include "uwdae/system.hpp"
#include "uwdae/temporal.hpp"
#include "uwdae/theta.hpp"
#include "uwdae/time_function.hpp"
#include "uwdae/types.hpp"

#endif // UWDAE_UWDAE_HPP
