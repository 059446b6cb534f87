// Umbrella header for the machine library. The HTTP service lives separately
// in service.hpp because it pulls in the HTTP and JSON dependencies.

#pragma once

#include "core.hpp"
#include "dot.hpp"
#include "machine_file.hpp"
#include "subset.hpp"
#include "viz.hpp"
