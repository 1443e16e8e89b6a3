#include "qpmspdc/cli/app.hpp"

int main(int argc, char** argv) { return qpmspdc::cli::run(argc, argv); }
