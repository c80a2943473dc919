#ifndef UWDAE_ERRORS_HPP
#define UWDAE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uwdae
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (files, dimensions, flags).
class InputError : public Error
{
public:
    using Error::Error;
};

/// Numerical failure that stems from the data (singular pencils, non-SPD systems).
class NumericalError : public Error
{
public:
    using Error::Error;
};

class DimensionMismatch : public InputError
{
public:
    using InputError::InputError;
};

class ParameterDimensionMismatch : public DimensionMismatch
{
public:
    using DimensionMismatch::DimensionMismatch;
};

class InconsistentExtension : public InputError
{
public:
    using InputError::InputError;
};

class GridMismatch : public InputError
{
public:
    using InputError::InputError;
};

class OutOfDomain : public InputError
{
public:
    using InputError::InputError;
};

class UnsupportedSource : public InputError
{
public:
    using InputError::InputError;
};

class UnsupportedSystem : public InputError
{
public:
    using InputError::InputError;
};

class IrregularPencil : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class SingularAssembly : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class FactorizationFailure : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class StepSingular : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class DegenerateTraining : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class SingularReducedSystem : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

} // namespace uwdae

#endif // UWDAE_ERRORS_HPP
