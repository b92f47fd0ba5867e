#include "runlog.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace asindy {

const char* const kRunLogSchemaTag = "# asindy-runlog v1";

namespace {

const char* const kHeader =
    "t,"
    "pd_x,pd_y,pd_z,vd_x,vd_y,vd_z,ad_x,ad_y,ad_z,"
    "p_x,p_y,p_z,v_x,v_y,v_z,"
    "roll,pitch,yaw,wx,wy,wz,"
    "thrust,att_des_roll,att_des_pitch,att_des_yaw,"
    "fw_x,fw_y,fw_z,aw_x,aw_y,aw_z,"
    "fdist_x,fdist_y,fdist_z,fhat_x,fhat_y,fhat_z,"
    "s_x,s_y,s_z,ep_x,ep_y,ep_z,ev_x,ev_y,ev_z,"
    "event";

constexpr int kNumCols = 48;

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_vec(std::string& out, const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    out += ',';
    append_num(out, v[i]);
  }
}

}  // namespace

void RunLog::validate_timing(double max_jitter) const {
  if (rows.size() < 2) throw DataError("runlog: need at least 2 samples");
  const double med = median_dt();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dt = rows[i].t - rows[i - 1].t;
    if (!(dt > 0.0)) throw DataError("runlog: timestamps not strictly increasing");
    if (std::abs(dt - med) > max_jitter * med) {
      throw DataError("runlog: sampling jitter exceeds tolerance");
    }
  }
}

double RunLog::median_dt() const {
  if (rows.size() < 2) throw DataError("runlog: need at least 2 samples");
  std::vector<double> gaps(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    gaps[i - 1] = rows[i].t - rows[i - 1].t;
  }
  auto mid = gaps.begin() + gaps.size() / 2;
  std::nth_element(gaps.begin(), mid, gaps.end());
  return *mid;
}

void save_runlog(const RunLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("runlog: cannot open '" + path + "' for writing");
  out << kRunLogSchemaTag << '\n' << kHeader << '\n';
  std::string line;
  for (const RunLogRow& r : log.rows) {
    line.clear();
    append_num(line, r.t);
    append_vec(line, r.p_d);
    append_vec(line, r.v_d);
    append_vec(line, r.a_d);
    append_vec(line, r.p);
    append_vec(line, r.v);
    append_vec(line, r.eta);
    append_vec(line, r.omega);
    line += ',';
    append_num(line, r.thrust);
    append_vec(line, r.att_des);
    append_vec(line, r.f_wind);
    append_vec(line, r.a_wind);
    append_vec(line, r.f_dist);
    append_vec(line, r.f_hat);
    append_vec(line, r.s);
    append_vec(line, r.e_p);
    append_vec(line, r.e_v);
    line += ',';
    line += std::to_string(r.event);
    out << line << '\n';
  }
  if (!out) throw IoError("runlog: write failed for '" + path + "'");
}

RunLog load_runlog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("runlog: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kRunLogSchemaTag) {
    throw DataError("runlog: '" + path + "' has an unknown schema tag");
  }
  if (!std::getline(in, line) || line != kHeader) {
    throw DataError("runlog: '" + path + "' header does not match schema v1");
  }

  RunLog log;
  std::vector<double> vals;
  vals.reserve(kNumCols);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    vals.clear();
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      vals.push_back(std::strtod(line.c_str() + pos, nullptr));
      pos = comma + 1;
    }
    if (vals.size() != kNumCols) {
      throw DataError("runlog: '" + path + "' row has wrong column count");
    }
    RunLogRow r;
    int k = 0;
    auto take = [&]() { return vals[k++]; };
    auto take3 = [&]() {
      Vec3 v;
      v.x() = take(); v.y() = take(); v.z() = take();
      return v;
    };
    r.t = take();
    r.p_d = take3(); r.v_d = take3(); r.a_d = take3();
    r.p = take3(); r.v = take3();
    r.eta = take3(); r.omega = take3();
    r.thrust = take();
    r.att_des = take3();
    r.f_wind = take3(); r.a_wind = take3();
    r.f_dist = take3(); r.f_hat = take3(); r.s = take3();
    r.e_p = take3(); r.e_v = take3();
    r.event = static_cast<int>(take());
    log.rows.push_back(r);
  }
  return log;
}

}  // namespace asindy
