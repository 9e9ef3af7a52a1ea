#pragma once

#include <stdexcept>
#include <string>

namespace viewrank {

enum class Errc {
  ok = 0,
  malformed_line,
  duplicate_post,
  degenerate_user,
  empty_posts,
  negative_input,
  too_few_rows,
  singular_system,
  dimension_mismatch,
  too_few_samples,
  unfitted_model,
  too_few_distinct_values,
  centroid_collapse,
  cluster_too_small,
  length_mismatch,
  constant_target,
  degenerate_ranking,
  too_few_users,
  invalid_fold,
  no_edges,
  invalid_config,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace viewrank
