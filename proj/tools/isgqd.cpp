#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "isgqd/error.hpp"
#include "isgqd/report.hpp"
#include "isgqd/spec_io.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw isgqd::Error(isgqd::ErrorCode::kUnsupported, "cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse semigroup analysis: Green's relations, groupoids, QD projections, traces"};
  app.require_subcommand(1);

  std::string spec_path, out_dir;
  isgqd::CommandOptions opt;
  int r = opt.r, n = opt.n, m = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", spec_path, "Semigroup spec (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Directory for report files; stdout when omitted");
    sub->add_option("--seed", opt.seed, "Seed for randomized checks");
    sub->add_option("--tol", opt.tol, "Numerical tolerance");
  };
  auto* analyze = app.add_subcommand("analyze", "Full structural report");
  add_common(analyze);
  analyze->add_option("--n-max", opt.n_max, "Largest n in the projection schedule");
  analyze->add_option("--strategy", opt.strategy, "full | berg | user:<file>");
  analyze->add_flag("--margin", opt.margin, "Solve the trace-margin LP on qdnotr specs");

  auto* qd = app.add_subcommand("qd", "Quasi-diagonal projections for n = 1..n-max");
  add_common(qd);
  qd->add_option("--n-max", opt.n_max, "Largest n in the projection schedule");
  qd->add_option("--strategy", opt.strategy, "full | berg | user:<file>");

  auto* nonfl = app.add_subcommand("nonfl", "Free-group tower projection");
  add_common(nonfl);
  nonfl->add_option("--r", r, "Word length of the tested generators' reach");
  nonfl->add_option("--n", n, "Ball radius of the projection");
  nonfl->add_option("--m", m, "Tower level (default: top)");
  nonfl->add_option("--weights", opt.weights, "corrected | as_printed")
      ->check(CLI::IsMember({"corrected", "as_printed"}));

  auto* trace = app.add_subcommand("trace", "Trace space, canonical traces and margins");
  add_common(trace);
  trace->add_flag("--margin", opt.margin, "Solve the trace-margin LP on qdnotr specs");

  auto* groupoid = app.add_subcommand("groupoid", "Germ groupoid table");
  add_common(groupoid);

  CLI11_PARSE(app, argc, argv);
  opt.r = r;
  opt.n = n;
  if (m >= 0) opt.m = static_cast<std::size_t>(m);

  try {
    const isgqd::LoadedSpec spec = isgqd::load_spec(spec_path);
    isgqd::CommandResult res;
    std::string name;
    if (analyze->parsed()) {
      res = isgqd::run_analyze(spec, opt);
      name = "analyze";
    } else if (qd->parsed()) {
      res = isgqd::run_qd(spec, opt);
      name = "qd";
    } else if (nonfl->parsed()) {
      res = isgqd::run_nonfl(spec, opt);
      name = "nonfl";
    } else if (trace->parsed()) {
      res = isgqd::run_trace(spec, opt);
      name = "trace";
    } else {
      res = isgqd::run_groupoid(spec, opt);
      name = "groupoid";
    }
    const std::string text = res.report.dump(2) + "\n";
    if (out_dir.empty()) {
      std::cout << text;
    } else {
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / (name + ".json"), text);
      if (res.csv) write_file(std::filesystem::path(out_dir) / (name + ".csv"), *res.csv);
    }
    if (res.report.contains("verdict")) std::cerr << res.report["verdict"].get<std::string>() << '\n';
    return res.exit_code;
  } catch (const isgqd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
