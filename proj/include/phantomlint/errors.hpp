/*
 * Copyright (C) 2026 The phantomlint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace phantomlint {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input is not parseable XML or lacks the expected root element.
class MalformedXml : public Error {
public:
  using Error::Error;
};

/// The same binary class name occurs twice in one spec document.
class DuplicateClass : public Error {
public:
  using Error::Error;
};

/// A method descriptor violates the JVM descriptor grammar.
class BadDescriptor : public Error {
public:
  using Error::Error;
};

class IoFailure : public Error {
public:
  using Error::Error;
};

class VersionMismatch : public Error {
public:
  using Error::Error;
};

/// A dataset / verdicts / scores line does not match its documented shape.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// A record id has no corresponding prediction or verdict.
class MissingPrediction : public Error {
public:
  using Error::Error;
};

/// A score row references an id absent from the dataset.
class UnknownId : public Error {
public:
  using Error::Error;
};

} // namespace phantomlint
