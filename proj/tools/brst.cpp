#include <iostream>
int main() { std::cout << "brst cli (under construction)\n"; return 0; }
