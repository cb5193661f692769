#ifndef CONVLAB_CLI_HPP
#define CONVLAB_CLI_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace convlab {

struct JobSpec {
  std::string command;
  std::string input_path;
  std::map<std::string, std::string> params; // rationals as "num/den"
  std::string output;                        // json, csv, svg or dot; empty for the default
  std::string out_path;                      // empty for the output stream
};

const std::vector<std::string>& job_commands();
// Parameter names accepted by a command.
const std::vector<std::string>& job_params(const std::string& command);

// Exit status: 0 certified, 1 flagged or partial, 2 error. Flags and errors go
// to err, one per line.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

} // namespace convlab

#endif
