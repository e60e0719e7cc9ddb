#pragma once

#include "sgfb/basis.hpp"
#include "sgfb/denoise.hpp"
#include "sgfb/design.hpp"
#include "sgfb/error.hpp"
#include "sgfb/filterbank.hpp"
#include "sgfb/graph.hpp"
#include "sgfb/io.hpp"
#include "sgfb/sampling.hpp"
