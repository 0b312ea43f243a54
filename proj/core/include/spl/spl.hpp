#pragma once

#include "spl/colour.hpp"
#include "spl/diffops.hpp"
#include "spl/error.hpp"
#include "spl/image.hpp"
#include "spl/image_io.hpp"
#include "spl/metrics.hpp"
#include "spl/optimize.hpp"
#include "spl/parallel.hpp"
#include "spl/profile_loss.hpp"
#include "spl/random.hpp"
#include "spl/report_json.hpp"
#include "spl/verify.hpp"
