#pragma once
#include "../vendor/doctest.h"
