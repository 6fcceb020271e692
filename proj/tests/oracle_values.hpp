// Copyright 2026 The qcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace qcert::oracle {

// Teleportation bounds from an independent conic solver (tests/oracles/sweep.py)
// for isotropic qutrit states at p = 0, 0.05, ..., 1 and the ideal measurement.
inline constexpr double kCase1[21] = {
    0.0000000006, 0.0000000029, 0.0000000076, 0.0000000076, 0.0000000007, 0.0000000091,
    0.0000000002, 0.0053642359, 0.0338137411, 0.0814613199, 0.1410902050, 0.2086343206,
    0.2820540881, 0.3602217775, 0.4424348728, 0.5282101647, 0.6171881176, 0.7090828084,
    0.8036554513, 0.9006933896, 0.9999999418};
inline constexpr double kCase2[21] = {
    -0.0000000030, 0.0013263301, 0.0299987173, 0.0698778604, 0.1144178948, 0.1617507128,
    0.2110356381, 0.2618150647, 0.3138129548, 0.3668593665, 0.4208855075, 0.4759554508,
    0.5320331963, 0.5889336319, 0.6464866423, 0.7045618305, 0.7630603217, 0.8219063320,
    0.8810409729, 0.9404178594, 1.0000000000};

inline constexpr double kGridStep = 0.05;

}  // namespace qcert::oracle
