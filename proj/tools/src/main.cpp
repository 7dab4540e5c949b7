#include "dgc_app/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return dgc::app::main_entry(argc, argv, std::cout, std::cerr); }
