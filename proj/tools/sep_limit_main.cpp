#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seplim/constants.hpp"
#include "seplim/limitlaw.hpp"
#include "seplim/perm.hpp"
#include "seplim/rng.hpp"
#include "seplim/sampler.hpp"
#include "seplim/schroeder.hpp"
#include "seplim/stablelab.hpp"
#include "seplim/stats.hpp"

namespace {

using namespace seplim;

struct options {
  std::uint64_t seed = 1;
  int threads = 4;
  std::string table_path;

  std::int64_t n = 0;
  std::int64_t m = 1;
  std::int64_t count = 1;
  std::int64_t reps = 10000;
  std::int64_t value_cap = 10;
  std::int64_t cap = kDefaultLengthCap;
  std::string perm_class = "all";
  std::string mode = "mechanism";
  std::string kind = "z";
  std::string which = "discard";
  std::string format;
  std::string t_grid = "0:2:9";
  double s_fixed = 1.0;
  std::vector<std::string> perm_tokens;
};

// Table resolution: an explicit --table (or SEP_LIMIT_TABLE) names a cache
// file that is loaded when present and (re)built and saved when missing or
// too small; without one the table is computed in memory, which at the
// default bound takes well under a second.
std::shared_ptr<const schroeder_table> resolve_table(const options& opt, std::int64_t need) {
  std::string path = opt.table_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SEP_LIMIT_TABLE")) path = env;
  }
  if (path.empty()) {
    return std::make_shared<const schroeder_table>(schroeder_table::compute(need));
  }
  if (std::filesystem::exists(path)) {
    auto loaded = std::make_shared<const schroeder_table>(schroeder_table::load(path));
    if (loaded->max_n() >= need) return loaded;
  }
  // modest floor keeps the cache useful across typical commands without
  // writing a huge file for a small first request
  auto built = std::make_shared<const schroeder_table>(
      schroeder_table::compute(std::max<std::int64_t>(need, 2048)));
  built->save(path);
  return built;
}

sep_class class_of(const std::string& name) {
  if (name == "all") return sep_class::all;
  if (name == "indec") return sep_class::indecomposable;
  if (name == "skewindec") return sep_class::skew_indecomposable;
  throw std::invalid_argument("unknown class: " + name);
}

prefix_mode mode_of(const std::string& name) {
  if (name == "theorem") return prefix_mode::theorem;
  if (name == "mechanism") return prefix_mode::mechanism;
  throw std::invalid_argument("unknown mode: " + name);
}

std::vector<double> parse_t_grid(const std::string& spec) {
  std::vector<double> out;
  auto parse_one = [](const std::string& tok) {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad t-grid value: " + tok);
    }
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    // start:stop:count, endpoints included
    std::istringstream in(spec);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) ||
        c.empty()) {
      throw std::invalid_argument("t-grid wants start:stop:count, got: " + spec);
    }
    double start = parse_one(a);
    double stop = parse_one(b);
    std::int64_t count = std::stoll(c);
    if (count < 1) throw std::invalid_argument("t-grid count must be >= 1");
    for (std::int64_t i = 0; i < count; ++i) {
      out.push_back(count == 1 ? start
                               : start + (stop - start) * static_cast<double>(i) /
                                     static_cast<double>(count - 1));
    }
    return out;
  }
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_one(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty t-grid");
  return out;
}

std::string coord_str(std::int64_t v) {
  return v == kInfCoord ? std::string("inf") : std::to_string(v);
}

int run_count(const options& opt) {
  auto table = resolve_table(opt, opt.n);
  std::printf("%s\n", table->s(opt.n).get_str().c_str());
  return 0;
}

int run_check(const options& opt) {
  std::string text;
  for (const auto& tok : opt.perm_tokens) {
    if (!text.empty()) text += ' ';
    text += tok;
  }
  permutation p = permutation::parse(text);
  auto witness = find_forbidden(p);
  if (!witness) {
    std::printf("separable\n");
    // the recursive tree builder is for display sizes; huge inputs still get
    // their verdict from the iterative check above
    if (p.size() <= 10000) {
      auto tree = build_sep_tree(p);
      std::printf("%s\n", tree_str(*tree).c_str());
    }
    return 0;
  }
  std::printf("not separable\n");
  std::vector<std::int64_t> pos(witness->begin(), witness->end());
  permutation pat = pattern_of(p, pos);
  std::string pat_txt;
  for (std::int64_t v : pat.values()) pat_txt += std::to_string(v);
  std::printf("witness %s at positions %lld %lld %lld %lld\n", pat_txt.c_str(),
              static_cast<long long>(pos[0] + 1), static_cast<long long>(pos[1] + 1),
              static_cast<long long>(pos[2] + 1), static_cast<long long>(pos[3] + 1));
  return 0;
}

int run_sample(const options& opt) {
  auto table = resolve_table(opt, opt.n);
  sep_sampler sampler(table);
  rng_stream rng(opt.seed);
  sep_class c = class_of(opt.perm_class);
  for (std::int64_t i = 0; i < opt.count; ++i) {
    std::printf("%s\n", sampler.sample(opt.n, c, rng).str().c_str());
  }
  return 0;
}

int run_limit(const options& opt) {
  auto table = resolve_table(opt, std::min<std::int64_t>(opt.cap, schroeder_table::default_bound));
  sep_sampler sampler(table);
  law_suite laws;
  rng_stream rng(opt.seed);
  prefix_window w = sample_limit_prefix(opt.m, mode_of(opt.mode), opt.cap, sampler, laws, rng);

  std::printf("# sep-limit %s limit seed=%llu mode=%s m=%lld cap=%lld\n", kToolVersion,
              static_cast<unsigned long long>(opt.seed), opt.mode.c_str(),
              static_cast<long long>(opt.m), static_cast<long long>(opt.cap));
  std::string coords;
  for (std::size_t i = 0; i < w.coords.size(); ++i) {
    if (i) coords += ' ';
    coords += coord_str(w.coords[i]);
  }
  std::printf("coords: %s\n", coords.c_str());
  std::printf("pieces:\n");
  for (std::size_t i = 0; i < w.pieces.size(); ++i) {
    const limit_piece& piece = w.pieces[i];
    std::printf("  piece %zu: discarded=%lld kind=%s len=%lld", i + 1,
                static_cast<long long>(piece.discarded), piece.is_perm ? "perm" : "inf",
                static_cast<long long>(piece.len));
    if (piece.content) std::printf(" values=%s", piece.content->str().c_str());
    std::printf("\n");
  }
  ratio_values r = ratio_stats(w);
  if (r.undefined) {
    std::printf("ratio appearing/appearing-or-discarded: undefined\n");
  } else {
    std::printf("ratio appearing/appearing-or-discarded: %.6f\n", r.appearing_vs_total);
  }
  std::printf("ratio integers/coordinates: %.6f\n", r.integers_vs_coords);
  std::printf("frontier: %lld\n", static_cast<long long>(w.frontier));
  std::printf("truncated: %s\n", w.truncated ? "true" : "false");
  return 0;
}

int run_converge(const options& opt) {
  auto table = resolve_table(opt, opt.n);
  sep_sampler sampler(table);
  tv_report rep = compare_prefix_laws(opt.n, opt.m, opt.value_cap, opt.reps, mode_of(opt.mode),
                                      sampler, opt.seed, opt.threads);
  nlohmann::json j = nlohmann::json::parse(tv_report_json(rep));
  j["version"] = kToolVersion;
  j["command"] = "converge";
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

int run_stable_cf(const options& opt) {
  std::vector<double> grid = parse_t_grid(opt.t_grid);
  std::printf("# sep-limit %s stable-cf kind=%s n=%lld", kToolVersion, opt.kind.c_str(),
              static_cast<long long>(opt.n));
  if (opt.kind == "joint") std::printf(" s=%.17g", opt.s_fixed);
  std::printf("\n");
  std::printf("t,re_exact,im_exact,re_limit,im_limit,abs_err\n");
  for (double t : grid) {
    std::complex<double> exact, limit;
    if (opt.kind == "zl") {
      exact = exact_cf_l_sum(t, opt.n);
      limit = stable_cf(stable_kind::zl, t);
    } else if (opt.kind == "zr") {
      exact = exact_cf_r_sum(t, opt.n);
      limit = stable_cf(stable_kind::zr, t);
    } else if (opt.kind == "z") {
      exact = exact_cf_compound(t, opt.n);
      limit = stable_cf(stable_kind::z, t);
    } else if (opt.kind == "joint") {
      exact = joint_cf(t, opt.s_fixed, opt.n);
      limit = stable_cf(stable_kind::z, t) * stable_cf(stable_kind::z, opt.s_fixed);
    } else {
      throw std::invalid_argument("unknown kind: " + opt.kind);
    }
    std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, exact.real(), exact.imag(),
                limit.real(), limit.imag(), std::abs(exact - limit));
  }
  return 0;
}

int run_stable_ratio(const options& opt) {
  ratio_kind which =
      opt.which == "discard" ? ratio_kind::discard : ratio_kind::infinity_blocks;
  if (opt.which != "discard" && opt.which != "infinity") {
    throw std::invalid_argument("unknown which: " + opt.which);
  }
  ratio_summary sum = mc_ratio(which, opt.n, opt.reps, opt.seed, opt.threads);
  nlohmann::json j = nlohmann::json::parse(ratio_summary_json(sum));
  j["version"] = kToolVersion;
  j["command"] = "stable-ratio";
  if (opt.format == "json") {
    j["samples"] = sum.samples;
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }
  std::printf("# sep-limit %s stable-ratio which=%s n=%lld reps=%lld seed=%llu\n", kToolVersion,
              opt.which.c_str(), static_cast<long long>(opt.n),
              static_cast<long long>(opt.reps), static_cast<unsigned long long>(opt.seed));
  std::printf("replica,ratio\n");
  for (std::size_t i = 0; i < sum.samples.size(); ++i) {
    std::printf("%zu,%.17g\n", i, sum.samples[i]);
  }
  std::printf("# summary\n%s\n", j.dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  options opt;
  CLI::App app{"separable-permutation limit toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "rng seed; fixes all randomized output");
    sub->add_option("--threads", opt.threads, "worker threads for experiment replicas")
        ->check(CLI::Range(1, 256));
    sub->add_option("--table", opt.table_path,
                    "schroeder table cache file (env SEP_LIMIT_TABLE)");
  };

  CLI::App* count = app.add_subcommand("count", "number of separable permutations of [n]");
  count->add_option("--n", opt.n, "permutation length")->required()->check(CLI::PositiveNumber);
  add_common(count);

  CLI::App* check = app.add_subcommand("check", "separability verdict with decomposition");
  check->add_option("perm", opt.perm_tokens, "one-line permutation, compact or space separated")
      ->required();
  add_common(check);

  CLI::App* sample = app.add_subcommand("sample", "uniform separable permutations");
  sample->add_option("--n", opt.n, "permutation length")->required()->check(CLI::PositiveNumber);
  sample->add_option("--class", opt.perm_class, "all, indec or skewindec")
      ->check(CLI::IsMember({"all", "indec", "skewindec"}));
  sample->add_option("--count", opt.count, "how many to print")->check(CLI::PositiveNumber);
  add_common(sample);

  CLI::App* limit = app.add_subcommand("limit", "prefix of the limiting random element");
  limit->add_option("--m", opt.m, "coordinates to produce")->required()->check(CLI::PositiveNumber);
  limit->add_option("--mode", opt.mode, "theorem or mechanism")
      ->check(CLI::IsMember({"theorem", "mechanism"}));
  limit->add_option("--cap", opt.cap, "single-component length cap")->check(CLI::PositiveNumber);
  add_common(limit);

  CLI::App* converge = app.add_subcommand("converge", "finite-n vs limit prefix-law distance");
  converge->add_option("--n", opt.n, "finite permutation length")
      ->required()
      ->check(CLI::PositiveNumber);
  converge->add_option("--m", opt.m, "prefix coordinates")->required()->check(CLI::PositiveNumber);
  converge->add_option("--value-cap", opt.value_cap, "bucket cap; larger values pool with inf")
      ->check(CLI::PositiveNumber);
  converge->add_option("--reps", opt.reps, "samples per side")->check(CLI::PositiveNumber);
  converge->add_option("--mode", opt.mode, "theorem or mechanism")
      ->check(CLI::IsMember({"theorem", "mechanism"}));
  add_common(converge);

  CLI::App* stable_cf_cmd = app.add_subcommand("stable-cf", "exact vs limit characteristic functions");
  stable_cf_cmd->add_option("--kind", opt.kind, "zl, zr, z or joint")
      ->check(CLI::IsMember({"zl", "zr", "z", "joint"}));
  stable_cf_cmd->add_option("--n", opt.n, "factors in the exact product")
      ->check(CLI::PositiveNumber)
      ->default_val(10000);
  stable_cf_cmd->add_option("--t-grid", opt.t_grid, "start:stop:count or comma list");
  stable_cf_cmd->add_option("--s", opt.s_fixed, "second argument for kind joint");
  add_common(stable_cf_cmd);

  CLI::App* stable_ratio_cmd = app.add_subcommand("stable-ratio", "arcsine-limit ratio experiment");
  stable_ratio_cmd->add_option("--which", opt.which, "discard or infinity")
      ->check(CLI::IsMember({"discard", "infinity"}));
  stable_ratio_cmd->add_option("--n", opt.n, "pieces per replica")
      ->check(CLI::PositiveNumber)
      ->default_val(2000);
  stable_ratio_cmd->add_option("--reps", opt.reps, "replicas")->check(CLI::PositiveNumber);
  stable_ratio_cmd->add_option("--format", opt.format, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  add_common(stable_ratio_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (count->parsed()) return run_count(opt);
    if (check->parsed()) return run_check(opt);
    if (sample->parsed()) return run_sample(opt);
    if (limit->parsed()) return run_limit(opt);
    if (converge->parsed()) return run_converge(opt);
    if (stable_cf_cmd->parsed()) return run_stable_cf(opt);
    if (stable_ratio_cmd->parsed()) return run_stable_ratio(opt);
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
