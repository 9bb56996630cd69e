// Umbrella header.
#pragma once

#include "hgci/acceptance.hpp"
#include "hgci/bench.hpp"
#include "hgci/errors.hpp"
#include "hgci/hg_dist.hpp"
#include "hgci/invert.hpp"
#include "hgci/oracle.hpp"
#include "hgci/procedures.hpp"
