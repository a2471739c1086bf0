#include <sobfav/cli.hpp>

int main(int argc, char** argv) { return sobfav::cli::run(argc, argv); }
