/*******************************************************************************
 * @file:   main.cc
 * @brief:  batchcut executable.
 ******************************************************************************/
#include <iostream>

#include "commands.h"

int main(int argc, char* argv[]) {
    return batchcut::cli::run(argc, argv, std::cout, std::cerr);
}
