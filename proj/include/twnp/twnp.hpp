/*
   Copyright 2026 The twnp Authors

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

#ifndef TWNP_TWNP_HPP
#define TWNP_TWNP_HPP

#include <twnp/arith.hpp>
#include <twnp/combinatorics.hpp>
#include <twnp/dwork.hpp>
#include <twnp/ffield.hpp>
#include <twnp/hasse.hpp>
#include <twnp/io.hpp>
#include <twnp/lfunction.hpp>
#include <twnp/padic.hpp>
#include <twnp/polygon.hpp>
#include <twnp/sweep.hpp>

#endif
