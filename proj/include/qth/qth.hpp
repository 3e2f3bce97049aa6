/*
   Copyright 2026 The qtheight Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

// Umbrella header for the qth library.

#include "qth/errors.hpp"
#include "qth/rational.hpp"
#include "qth/poly.hpp"
#include "qth/zpoly_factor.hpp"
#include "qth/ffelem.hpp"
#include "qth/zt_poly.hpp"
#include "qth/parse.hpp"
#include "qth/qt_roots.hpp"
#include "qth/puiseux.hpp"
#include "qth/maps.hpp"
#include "qth/spine.hpp"
#include "qth/heights.hpp"
#include "qth/lattes.hpp"
#include "qth/quadratic.hpp"
#include "qth/itinerary.hpp"
#include "qth/dioph.hpp"
