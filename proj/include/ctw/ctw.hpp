#pragma once

#include "ctw/errors.hpp"
#include "ctw/words.hpp"
#include "ctw/random.hpp"
#include "ctw/rips.hpp"
#include "ctw/smallcancel.hpp"
#include "ctw/stallings.hpp"
#include "ctw/compressed.hpp"
#include "ctw/hnn.hpp"
#include "ctw/growth.hpp"
#include "ctw/experiment.hpp"
