// dirmix <verb> --config <file> [--out <dir>]
//
// Exit status: 0 success, 2 config error, 3 atom cap exceeded,
// 4 search exhaustion, 5 Kronecker algebra unsupported, 1 anything else.
// Failures print one line "dirmix: error=<kind> reason=<text>" to stderr.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "dirmix/config.hpp"
#include "dirmix/errors.hpp"
#include "dirmix/runner.hpp"

namespace {

const char* kind_name(dirmix::ErrorKind kind) {
  switch (kind) {
    case dirmix::ErrorKind::kConfig: return "config";
    case dirmix::ErrorKind::kCapExceeded: return "cap_exceeded";
    case dirmix::ErrorKind::kSearchExhausted: return "search_exhaustion";
    case dirmix::ErrorKind::kUnsupportedKronecker: return "unsupported_kvn";
  }
  return "unknown";
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirmix: directional mixing laboratory for model Z^2 systems"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir;
  std::string verb;
  for (const char* v : dirmix::kVerbs) {
    auto* sub = app.add_subcommand(v, std::string("run the ") + v + " experiment");
    sub->add_option("--config,-c", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out,-o", out_dir, "output directory (overrides output.dir)");
    sub->callback([&verb, v] { verb = v; });
  }
  app.add_flag_callback("--version", [] {
    std::cout << "dirmix " << dirmix::tool_version() << '\n';
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    dirmix::ExperimentConfig cfg = dirmix::load_config(config_path, verb);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const dirmix::RunManifest manifest = dirmix::run(cfg);
    std::cout << "dirmix " << verb << ": wrote " << manifest.files.size() << " files to "
              << cfg.out_dir.string() << '\n';
    return 0;
  } catch (const dirmix::Error& e) {
    std::cerr << "dirmix: error=" << kind_name(e.kind()) << " reason=" << one_line(e.what()) << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "dirmix: error=internal reason=" << one_line(e.what()) << '\n';
    return 1;
  }
}
