// Copyright 2026 The icmrd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICMRD_INFORMATION_H_
#define ICMRD_INFORMATION_H_

// Information measures in bits (log base 2), with 0·log 0 = 0.

#include "absl/status/statusor.h"
#include "icmrd/channel.h"
#include "icmrd/finite.h"

namespace icmrd {

double Entropy(const FiniteDistribution& dist);

// I(X; X̂) for X ~ source and X̂ | X ~ channel.
absl::StatusOr<double> MutualInformation(const FiniteDistribution& source,
                                         const Channel& channel);

}  // namespace icmrd

#endif  // ICMRD_INFORMATION_H_
