// Copyright 2026 The qcinit Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include "qcinit/clustering.hpp"
#include "qcinit/data.hpp"
#include "qcinit/dataset.hpp"
#include "qcinit/encoding.hpp"
#include "qcinit/errors.hpp"
#include "qcinit/experiment.hpp"
#include "qcinit/formulation.hpp"
#include "qcinit/pbp.hpp"
#include "qcinit/serialization.hpp"
#include "qcinit/solvers.hpp"
#include "qcinit/svg.hpp"
