#pragma once

#include "shiftdg/error.hpp"
#include "shiftdg/eventually_periodic.hpp"
#include "shiftdg/digraph.hpp"
#include "shiftdg/morphism.hpp"
#include "shiftdg/state_space.hpp"
#include "shiftdg/relation.hpp"
#include "shiftdg/lifting.hpp"
#include "shiftdg/dynsys.hpp"
#include "shiftdg/realization.hpp"
#include "shiftdg/fixtures.hpp"
#include "shiftdg/io.hpp"
#include "shiftdg/oracle.hpp"
