/*
 * Copyright 2026 The QPIR Lab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QPIR_UTIL_STATUS_MACROS_H_
#define QPIR_UTIL_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define QPIR_STATUS_CONCAT_INNER_(x, y) x##y
#define QPIR_STATUS_CONCAT_(x, y) QPIR_STATUS_CONCAT_INNER_(x, y)

// Evaluates `expr` (an absl::Status) and returns it from the enclosing
// function if it is not OK.
#define QPIR_RETURN_IF_ERROR(expr)             \
  do {                                         \
    const absl::Status _qpir_status = (expr);  \
    if (!_qpir_status.ok()) return _qpir_status; \
  } while (false)

#define QPIR_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                \
  if (!statusor.ok()) return statusor.status();           \
  lhs = std::move(statusor).value()

// Evaluates `rexpr` (an absl::StatusOr<T>); on error returns the status,
// otherwise move-assigns the value into `lhs`.
#define QPIR_ASSIGN_OR_RETURN(lhs, rexpr) \
  QPIR_ASSIGN_OR_RETURN_IMPL_(            \
      QPIR_STATUS_CONCAT_(_qpir_statusor_, __LINE__), lhs, rexpr)

#endif  // QPIR_UTIL_STATUS_MACROS_H_
