#ifndef RISBC_VERSION_HPP
#define RISBC_VERSION_HPP

#define RISBC_VERSION "0.1.0"

#endif
