#ifndef GHGD_GHGD_HPP
#define GHGD_GHGD_HPP

#include "ghgd/distribution.hpp"
#include "ghgd/error.hpp"
#include "ghgd/exact.hpp"
#include "ghgd/inference.hpp"
#include "ghgd/ingest.hpp"
#include "ghgd/moments.hpp"
#include "ghgd/problem.hpp"
#include "ghgd/sampler.hpp"
#include "ghgd/serialize.hpp"
#include "ghgd/version.hpp"

#endif  // GHGD_GHGD_HPP
