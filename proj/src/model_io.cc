//
// Copyright 2026 The tsmia Authors
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
//

#include "tsmia/model_io.h"

#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "tsmia/csv_io.h"
#include "tsmia/status_macros.h"

namespace tsmia {
namespace {

// Sequential reader over "key values..." lines.
class LineReader {
 public:
  explicit LineReader(const std::string& text)
      : lines_(absl::StrSplit(text, '\n')) {}

  absl::StatusOr<std::vector<absl::string_view>> Next(absl::string_view key,
                                                      int min_values = 0) {
    if (pos_ >= lines_.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("model file truncated, expected '", key, "'"));
    }
    std::vector<absl::string_view> fields =
        absl::StrSplit(absl::StripAsciiWhitespace(lines_[pos_++]), ' ',
                       absl::SkipEmpty());
    if (!key.empty() && (fields.empty() || fields[0] != key)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "model file line ", pos_, ": expected '", key, "'"));
    }
    if (static_cast<int>(fields.size()) - (key.empty() ? 0 : 1) < min_values) {
      return absl::InvalidArgumentError(
          absl::StrCat("model file line ", pos_, ": too few values"));
    }
    if (!key.empty()) fields.erase(fields.begin());
    return fields;
  }

 private:
  std::vector<absl::string_view> lines_;
  size_t pos_ = 0;
};

template <typename T>
absl::Status ParseInt(absl::string_view s, T* out) {
  if (!absl::SimpleAtoi(s, out)) {
    return absl::InvalidArgumentError(absl::StrCat("bad integer '", s, "'"));
  }
  return absl::OkStatus();
}

absl::Status ParseReal(absl::string_view s, double* out) {
  if (!absl::SimpleAtod(s, out)) {
    return absl::InvalidArgumentError(absl::StrCat("bad real '", s, "'"));
  }
  return absl::OkStatus();
}

}  // namespace

std::string SerializeForecaster(const TrainedForecaster& model) {
  const ForecasterConfig& c = model.config;
  std::string out = absl::StrCat("tsmia-model ", kModelFormatVersion, "\n");
  absl::StrAppend(&out, "kind ", ForecasterKindName(c.kind), "\n");
  absl::StrAppend(&out, "shape ", model.shape.variables, " ",
                  model.shape.lookback, " ", model.shape.horizon, "\n");
  absl::StrAppend(&out, "layers ",
                  absl::StrJoin(model.network.layer_sizes(), " "), "\n");
  absl::StrAppend(&out, "ridge_lambda ", FormatDouble(c.ridge_lambda), "\n");
  absl::StrAppend(&out, "hidden ", absl::StrJoin(c.hidden_sizes, " "), "\n");
  absl::StrAppend(&out, "learning_rate ", FormatDouble(c.learning_rate), "\n");
  absl::StrAppend(&out, "max_epochs ", c.max_epochs, "\n");
  absl::StrAppend(&out, "patience ", c.patience, "\n");
  absl::StrAppend(&out, "batch_size ", c.batch_size, "\n");
  absl::StrAppend(&out, "early_stopping ", c.early_stopping ? 1 : 0, "\n");
  absl::StrAppend(&out, "seed ", c.seed, "\n");
  absl::StrAppend(&out, "history ", model.history.size(), "\n");
  for (const EpochStats& e : model.history) {
    absl::StrAppend(&out, e.epoch, " ", FormatDouble(e.train_loss), " ",
                    FormatDouble(e.val_loss), "\n");
  }
  const Vector& p = model.network.parameters();
  absl::StrAppend(&out, "parameters ", p.size(), "\n");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    absl::StrAppend(&out, FormatDouble(p(i)), "\n");
  }
  return out;
}

absl::StatusOr<TrainedForecaster> ParseForecaster(const std::string& text) {
  LineReader reader(text);
  TrainedForecaster model;
  ForecasterConfig& c = model.config;

  TSMIA_ASSIGN_OR_RETURN(auto magic, reader.Next("tsmia-model", 1));
  int version = 0;
  TSMIA_RETURN_IF_ERROR(ParseInt(magic[0], &version));
  if (version != kModelFormatVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported model format version ", version));
  }
  TSMIA_ASSIGN_OR_RETURN(auto kind, reader.Next("kind", 1));
  if (kind[0] == "ridge") {
    c.kind = ForecasterKind::kRidge;
  } else if (kind[0] == "mlp") {
    c.kind = ForecasterKind::kMlp;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown model kind '", kind[0], "'"));
  }
  TSMIA_ASSIGN_OR_RETURN(auto shape, reader.Next("shape", 3));
  TSMIA_RETURN_IF_ERROR(ParseInt(shape[0], &model.shape.variables));
  TSMIA_RETURN_IF_ERROR(ParseInt(shape[1], &model.shape.lookback));
  TSMIA_RETURN_IF_ERROR(ParseInt(shape[2], &model.shape.horizon));
  TSMIA_ASSIGN_OR_RETURN(auto layer_fields, reader.Next("layers", 2));
  std::vector<int> layers(layer_fields.size());
  for (size_t i = 0; i < layers.size(); ++i) {
    TSMIA_RETURN_IF_ERROR(ParseInt(layer_fields[i], &layers[i]));
  }
  TSMIA_ASSIGN_OR_RETURN(auto lambda, reader.Next("ridge_lambda", 1));
  TSMIA_RETURN_IF_ERROR(ParseReal(lambda[0], &c.ridge_lambda));
  TSMIA_ASSIGN_OR_RETURN(auto hidden, reader.Next("hidden"));
  c.hidden_sizes.assign(hidden.size(), 0);
  for (size_t i = 0; i < hidden.size(); ++i) {
    TSMIA_RETURN_IF_ERROR(ParseInt(hidden[i], &c.hidden_sizes[i]));
  }
  TSMIA_ASSIGN_OR_RETURN(auto lr, reader.Next("learning_rate", 1));
  TSMIA_RETURN_IF_ERROR(ParseReal(lr[0], &c.learning_rate));
  TSMIA_ASSIGN_OR_RETURN(auto epochs, reader.Next("max_epochs", 1));
  TSMIA_RETURN_IF_ERROR(ParseInt(epochs[0], &c.max_epochs));
  TSMIA_ASSIGN_OR_RETURN(auto patience, reader.Next("patience", 1));
  TSMIA_RETURN_IF_ERROR(ParseInt(patience[0], &c.patience));
  TSMIA_ASSIGN_OR_RETURN(auto batch, reader.Next("batch_size", 1));
  TSMIA_RETURN_IF_ERROR(ParseInt(batch[0], &c.batch_size));
  TSMIA_ASSIGN_OR_RETURN(auto es, reader.Next("early_stopping", 1));
  c.early_stopping = es[0] == "1";
  TSMIA_ASSIGN_OR_RETURN(auto seed, reader.Next("seed", 1));
  TSMIA_RETURN_IF_ERROR(ParseInt(seed[0], &c.seed));

  TSMIA_ASSIGN_OR_RETURN(auto history, reader.Next("history", 1));
  size_t history_count = 0;
  TSMIA_RETURN_IF_ERROR(ParseInt(history[0], &history_count));
  for (size_t i = 0; i < history_count; ++i) {
    TSMIA_ASSIGN_OR_RETURN(auto row, reader.Next("", 3));
    EpochStats e;
    TSMIA_RETURN_IF_ERROR(ParseInt(row[0], &e.epoch));
    TSMIA_RETURN_IF_ERROR(ParseReal(row[1], &e.train_loss));
    TSMIA_RETURN_IF_ERROR(ParseReal(row[2], &e.val_loss));
    model.history.push_back(e);
  }

  TSMIA_ASSIGN_OR_RETURN(auto params, reader.Next("parameters", 1));
  Eigen::Index count = 0;
  TSMIA_RETURN_IF_ERROR(ParseInt(params[0], &count));
  Vector values(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    TSMIA_ASSIGN_OR_RETURN(auto row, reader.Next("", 1));
    TSMIA_RETURN_IF_ERROR(ParseReal(row[0], &values(i)));
  }
  if (layers.front() != model.shape.input_size() ||
      layers.back() != model.shape.output_size()) {
    return absl::InvalidArgumentError("layer sizes disagree with shape");
  }
  model.network = DenseNetwork(std::move(layers));
  TSMIA_RETURN_IF_ERROR(model.network.SetParameters(std::move(values)));
  return model;
}

absl::Status SaveForecaster(const std::string& path,
                            const TrainedForecaster& model) {
  return WriteStringToFile(path, SerializeForecaster(model));
}

absl::StatusOr<TrainedForecaster> LoadForecaster(const std::string& path) {
  TSMIA_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  return ParseForecaster(text);
}

}  // namespace tsmia
