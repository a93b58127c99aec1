#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bridgeirt {

struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Roll-call matrix. votes is row-major I*J with 1 = yea, 0 = nay, -1 = missing.
struct VoteMatrix {
  int I = 0;
  int J = 0;
  std::vector<std::int8_t> votes;
  std::vector<std::string> legislator_ids;
  std::vector<std::string> bill_ids;

  std::int8_t operator()(int i, int j) const { return votes[static_cast<std::size_t>(i) * J + j]; }
  std::int8_t& operator()(int i, int j) { return votes[static_cast<std::size_t>(i) * J + j]; }
  bool observed(int i, int j) const { return (*this)(i, j) >= 0; }
};

// Per-bill domain labels, aligned with VoteMatrix columns.
// 0 = procedural, 1 = final passage.
struct VoteTypeVector {
  std::vector<std::uint8_t> gamma;
};

// Centered covariate matrix, rows aligned with VoteMatrix legislator_ids.
struct DesignMatrix {
  Eigen::MatrixXd X;
  std::vector<std::string> column_names;
  std::vector<double> offsets;  // per-column means subtracted at load
  bool centered = false;

  int p() const { return static_cast<int>(X.cols()); }
};

struct AnchorSpec {
  int anchor_low = -1;
  int anchor_high = -1;
  std::array<double, 2> anchor_values{-1.0, 1.0};
  int sign_legislator = -1;
};

std::pair<VoteMatrix, VoteTypeVector> load_votes(const std::string& votes_path,
                                                 const std::string& types_path);

// Structural checks shared by the file loader and in-memory constructors:
// minimum sizes, both domains populated, every bill voted on at least once,
// every legislator observed in both domains.
void validate_votes(const VoteMatrix& votes, const VoteTypeVector& types);

void write_votes(const std::string& votes_path, const std::string& types_path,
                 const VoteMatrix& votes, const VoteTypeVector& types);

DesignMatrix load_covariates(const std::string& path, const std::vector<std::string>& ids);

void write_covariates(const std::string& path, const DesignMatrix& X,
                      const std::vector<std::string>& ids, bool uncenter = false);

// Centers each column to mean zero, recording offsets. Idempotent.
void center_columns(DesignMatrix& dm);

// anchors.json holds legislator ids; loading resolves them to row indices.
AnchorSpec load_anchors(const std::string& path, const std::vector<std::string>& ids);

void write_anchors(const std::string& path, const AnchorSpec& spec,
                   const std::vector<std::string>& ids);

const AnchorSpec& validate_anchors(const AnchorSpec& spec, const VoteMatrix& data);

}  // namespace bridgeirt
