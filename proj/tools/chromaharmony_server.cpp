#include "chromaharmony/service.hpp"

#include <iostream>

int main() {
  try {
    return chromaharmony::run_server(chromaharmony::ServiceConfig::from_env());
  } catch (const std::exception& e) {
    std::cerr << "chromaharmony-server: " << e.what() << "\n";
    return 1;
  }
}
