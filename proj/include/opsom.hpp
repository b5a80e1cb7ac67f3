#pragma once

#include "opsom/archives.hpp"
#include "opsom/errors.hpp"
#include "opsom/harness.hpp"
#include "opsom/learning.hpp"
#include "opsom/mutation.hpp"
#include "opsom/objective.hpp"
#include "opsom/optimizer.hpp"
#include "opsom/ortho_init.hpp"
#include "opsom/random.hpp"
#include "opsom/swarm.hpp"
