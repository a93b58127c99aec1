#include "bridgeirt/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace bridgeirt {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw DataError("empty file: " + path);
  return rows;
}

std::int8_t parse_vote(const std::string& cell, const std::string& path) {
  if (cell == "1") return 1;
  if (cell == "0") return 0;
  if (cell == "NA" || cell.empty()) return -1;
  throw DataError("unknown vote code '" + cell + "' in " + path);
}

double parse_number(const std::string& cell, const std::string& context) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    throw DataError("non-numeric cell '" + cell + "' in " + context);
  }
  if (pos != cell.size() || !std::isfinite(v))
    throw DataError("non-numeric cell '" + cell + "' in " + context);
  return v;
}

int resolve_id(const std::string& id, const std::unordered_map<std::string, int>& index,
               const std::string& context) {
  auto it = index.find(id);
  if (it == index.end()) throw DataError("unknown legislator id '" + id + "' in " + context);
  return it->second;
}

std::unordered_map<std::string, int> id_index(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    if (!index.emplace(ids[i], i).second) throw DataError("duplicate id '" + ids[i] + "'");
  }
  return index;
}

VoteMatrix parse_votes_wide(const std::vector<std::vector<std::string>>& rows,
                            const std::string& path) {
  VoteMatrix vm;
  const auto& header = rows[0];
  vm.J = static_cast<int>(header.size()) - 1;
  vm.I = static_cast<int>(rows.size()) - 1;
  if (vm.J < 1 || vm.I < 1) throw DataError("vote matrix too small in " + path);
  vm.bill_ids.assign(header.begin() + 1, header.end());
  vm.votes.assign(static_cast<std::size_t>(vm.I) * vm.J, -1);
  for (int i = 0; i < vm.I; ++i) {
    const auto& row = rows[i + 1];
    if (static_cast<int>(row.size()) != vm.J + 1)
      throw DataError("row length mismatch at line " + std::to_string(i + 2) + " in " + path);
    vm.legislator_ids.push_back(row[0]);
    for (int j = 0; j < vm.J; ++j) vm(i, j) = parse_vote(row[j + 1], path);
  }
  return vm;
}

VoteMatrix parse_votes_long(const std::vector<std::vector<std::string>>& rows,
                            const std::string& path) {
  std::vector<std::string> legislators, bills;
  std::unordered_map<std::string, int> li, bi;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) throw DataError("long vote row needs 3 cells in " + path);
    if (li.emplace(rows[r][0], static_cast<int>(legislators.size())).second)
      legislators.push_back(rows[r][0]);
    if (bi.emplace(rows[r][1], static_cast<int>(bills.size())).second)
      bills.push_back(rows[r][1]);
  }
  VoteMatrix vm;
  vm.I = static_cast<int>(legislators.size());
  vm.J = static_cast<int>(bills.size());
  vm.legislator_ids = std::move(legislators);
  vm.bill_ids = std::move(bills);
  vm.votes.assign(static_cast<std::size_t>(vm.I) * vm.J, -1);
  for (std::size_t r = 1; r < rows.size(); ++r)
    vm(li[rows[r][0]], bi[rows[r][1]]) = parse_vote(rows[r][2], path);
  return vm;
}

}  // namespace

std::pair<VoteMatrix, VoteTypeVector> load_votes(const std::string& votes_path,
                                                 const std::string& types_path) {
  const auto rows = read_csv(votes_path);
  const auto& header = rows[0];
  if (header.empty() || header[0] != "legislator_id")
    throw DataError("vote header must start with legislator_id in " + votes_path);

  VoteMatrix vm;
  const bool is_long = header.size() == 3 && header[1] == "bill_id" && header[2] == "vote";
  if (is_long)
    vm = parse_votes_long(rows, votes_path);
  else
    vm = parse_votes_wide(rows, votes_path);
  id_index(vm.legislator_ids);

  const auto trows = read_csv(types_path);
  if (trows[0].size() != 2 || trows[0][0] != "bill_id" || trows[0][1] != "gamma")
    throw DataError("vote type header must be bill_id,gamma in " + types_path);
  std::unordered_map<std::string, std::uint8_t> by_bill;
  for (std::size_t r = 1; r < trows.size(); ++r) {
    if (trows[r].size() != 2) throw DataError("bad vote type row in " + types_path);
    const std::string& g = trows[r][1];
    if (g != "0" && g != "1") throw DataError("gamma must be 0 or 1 in " + types_path);
    by_bill[trows[r][0]] = static_cast<std::uint8_t>(g == "1");
  }
  VoteTypeVector types;
  for (const auto& bill : vm.bill_ids) {
    auto it = by_bill.find(bill);
    if (it == by_bill.end())
      throw DataError("bill '" + bill + "' has no domain label in " + types_path);
    types.gamma.push_back(it->second);
  }
  if (by_bill.size() != static_cast<std::size_t>(vm.J))
    throw DataError("vote type count does not match bill count");

  validate_votes(vm, types);
  return {std::move(vm), std::move(types)};
}

void validate_votes(const VoteMatrix& vm, const VoteTypeVector& types) {
  if (vm.I < 3) throw DataError("need at least 3 legislators");
  if (vm.J < 2) throw DataError("need at least 2 bills");
  if (types.gamma.size() != static_cast<std::size_t>(vm.J))
    throw DataError("vote type count does not match bill count");

  const int n_final = static_cast<int>(std::count(types.gamma.begin(), types.gamma.end(), 1));
  if (n_final == 0) throw DataError("no final-passage bills (all gamma = 0)");
  if (n_final == vm.J) throw DataError("no procedural bills (all gamma = 1)");

  for (int j = 0; j < vm.J; ++j) {
    int seen = 0;
    for (int i = 0; i < vm.I; ++i) seen += vm.observed(i, j);
    if (seen == 0) throw DataError("bill '" + vm.bill_ids[j] + "' has no observed votes");
  }
  // A legislator absent from an entire domain has no data tying the two
  // ideal points together; reject rather than guess.
  for (int i = 0; i < vm.I; ++i) {
    int seen[2] = {0, 0};
    for (int j = 0; j < vm.J; ++j)
      if (vm.observed(i, j)) ++seen[types.gamma[j]];
    if (seen[0] == 0 || seen[1] == 0)
      throw DataError("legislator '" + vm.legislator_ids[i] +
                      "' has no observed votes in one domain");
  }
}

void write_votes(const std::string& votes_path, const std::string& types_path,
                 const VoteMatrix& votes, const VoteTypeVector& types) {
  std::ofstream out(votes_path);
  if (!out) throw DataError("cannot write file: " + votes_path);
  out << "legislator_id";
  for (const auto& b : votes.bill_ids) out << ',' << b;
  out << '\n';
  for (int i = 0; i < votes.I; ++i) {
    out << votes.legislator_ids[i];
    for (int j = 0; j < votes.J; ++j) {
      const std::int8_t v = votes(i, j);
      out << ',' << (v < 0 ? std::string("NA") : std::to_string(int(v)));
    }
    out << '\n';
  }
  std::ofstream tout(types_path);
  if (!tout) throw DataError("cannot write file: " + types_path);
  tout << "bill_id,gamma\n";
  for (int j = 0; j < votes.J; ++j)
    tout << votes.bill_ids[j] << ',' << int(types.gamma[j]) << '\n';
}

void center_columns(DesignMatrix& dm) {
  if (dm.offsets.empty()) dm.offsets.assign(dm.p(), 0.0);
  for (int k = 0; k < dm.p(); ++k) {
    const double mean = dm.X.col(k).mean();
    dm.X.col(k).array() -= mean;
    dm.offsets[k] += mean;
  }
  dm.centered = true;
}

DesignMatrix load_covariates(const std::string& path, const std::vector<std::string>& ids) {
  const auto rows = read_csv(path);
  const auto& header = rows[0];
  if (header.empty() || header[0] != "legislator_id")
    throw DataError("covariate header must start with legislator_id in " + path);
  const int p = static_cast<int>(header.size()) - 1;
  const int I = static_cast<int>(ids.size());
  if (static_cast<int>(rows.size()) - 1 != I)
    throw DataError("covariate row count does not match legislator count in " + path);

  DesignMatrix dm;
  dm.column_names.assign(header.begin() + 1, header.end());
  dm.X.resize(I, p);
  const auto index = id_index(ids);
  std::vector<bool> seen(ids.size(), false);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (static_cast<int>(row.size()) != p + 1)
      throw DataError("covariate row length mismatch in " + path);
    const int i = resolve_id(row[0], index, path);
    if (seen[i]) throw DataError("duplicate covariate row for '" + row[0] + "'");
    seen[i] = true;
    for (int k = 0; k < p; ++k) dm.X(i, k) = parse_number(row[k + 1], path);
  }
  for (int i = 0; i < I; ++i)
    if (!seen[i]) throw DataError("missing covariate row for '" + ids[i] + "' in " + path);

  center_columns(dm);
  for (int k = 0; k < p; ++k) {
    if (dm.X.col(k).lpNorm<Eigen::Infinity>() <= 1e-12)
      throw DataError("constant covariate column '" + dm.column_names[k] + "' in " + path);
  }
  return dm;
}

void write_covariates(const std::string& path, const DesignMatrix& X,
                      const std::vector<std::string>& ids, bool uncenter) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "legislator_id";
  for (const auto& name : X.column_names) out << ',' << name;
  out << '\n';
  out.precision(17);
  for (int i = 0; i < X.X.rows(); ++i) {
    out << ids[i];
    for (int k = 0; k < X.p(); ++k) {
      const double off = (uncenter && !X.offsets.empty()) ? X.offsets[k] : 0.0;
      out << ',' << X.X(i, k) + off;
    }
    out << '\n';
  }
}

AnchorSpec load_anchors(const std::string& path, const std::vector<std::string>& ids) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("bad anchors json in " + path + ": " + e.what());
  }
  const auto index = id_index(ids);
  AnchorSpec spec;
  try {
    spec.anchor_low = resolve_id(j.at("anchor_low").get<std::string>(), index, path);
    spec.anchor_high = resolve_id(j.at("anchor_high").get<std::string>(), index, path);
    spec.sign_legislator = resolve_id(j.at("sign_legislator").get<std::string>(), index, path);
    if (j.contains("anchor_values")) {
      spec.anchor_values[0] = j.at("anchor_values").at(0).get<double>();
      spec.anchor_values[1] = j.at("anchor_values").at(1).get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad anchors json in " + path + ": " + e.what());
  }
  return spec;
}

void write_anchors(const std::string& path, const AnchorSpec& spec,
                   const std::vector<std::string>& ids) {
  nlohmann::json j;
  j["anchor_low"] = ids.at(spec.anchor_low);
  j["anchor_high"] = ids.at(spec.anchor_high);
  j["anchor_values"] = {spec.anchor_values[0], spec.anchor_values[1]};
  j["sign_legislator"] = ids.at(spec.sign_legislator);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

const AnchorSpec& validate_anchors(const AnchorSpec& spec, const VoteMatrix& data) {
  auto in_range = [&](int i) { return i >= 0 && i < data.I; };
  if (!in_range(spec.anchor_low) || !in_range(spec.anchor_high) ||
      !in_range(spec.sign_legislator))
    throw DataError("anchor index out of range");
  if (spec.anchor_low == spec.anchor_high) throw DataError("identical anchor legislators");
  if (spec.anchor_values[0] == spec.anchor_values[1])
    throw DataError("identical anchor values");
  return spec;
}

}  // namespace bridgeirt
