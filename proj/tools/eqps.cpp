#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "eqps/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::string help;
    const auto request = eqps::parse_command_line(args, &help);
    if (!request) {
      std::cout << help;
      return 0;
    }
    const eqps::RunReport report = eqps::run(*request);
    const std::string text = eqps::render_report(report, request->format);
    if (request->out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(request->out);
      if (!out) {
        std::cerr << "error: cannot write '" << request->out << "'\n";
        return 1;
      }
      out << text;
    }
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eqps::exit_code_for(e);
  }
}
