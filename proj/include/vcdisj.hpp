#pragma once

#include "vcdisj/encoding.hpp"
#include "vcdisj/errors.hpp"
#include "vcdisj/geometry.hpp"
#include "vcdisj/io.hpp"
#include "vcdisj/protocols.hpp"
#include "vcdisj/reductions.hpp"
#include "vcdisj/runtime.hpp"
#include "vcdisj/setsystems.hpp"
#include "vcdisj/vcdim.hpp"
#include "vcdisj/verify.hpp"
