#pragma once

#include "macs/core.hpp"
#include "macs/dominance.hpp"
#include "macs/gen.hpp"
#include "macs/geometry.hpp"
#include "macs/global_search.hpp"
#include "macs/index_io.hpp"
#include "macs/ktcore.hpp"
#include "macs/local_search.hpp"
#include "macs/network.hpp"
#include "macs/oracle.hpp"
#include "macs/result.hpp"
#include "macs/rtree.hpp"
