#include "convlab/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  CLI::App app{"convlab: radii of convergence, profiles, skeletons and exponents"};
  app.require_subcommand(1);

  convlab::JobSpec job;
  std::map<std::string, std::string> values;
  for (const auto& name : convlab::job_commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("input", job.input_path, "input file (module, skeleton or exponent JSON)")->required();
    sub->add_option("-f,--format", job.output, "output format");
    sub->add_option("-o,--out", job.out_path, "write the result here instead of stdout");
    for (const auto& p : convlab::job_params(name)) {
      std::string flag = "--" + p;
      for (auto& ch : flag)
        if (ch == '_')
          ch = '-';
      sub->add_option(flag, values[name + ":" + p], "rational \"num/den\" or integer");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    job.command = sub->get_name();
    for (const auto& p : convlab::job_params(job.command)) {
      std::string flag = "--" + p;
      for (auto& ch : flag)
        if (ch == '_')
          ch = '-';
      if (sub->count(flag) > 0)
        job.params[p] = values[job.command + ":" + p];
    }
  }
  return convlab::run(job, std::cout, std::cerr);
}
