#pragma once

#include "multidet/oracle.hpp"

namespace oracle = multidet::oracle;
