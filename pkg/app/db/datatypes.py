from typing import Annotated

from pydantic import AfterValidator

from app.helpers.validations import (is_absolute_iri, is_http_iri,
                                     is_variable_name)

IriString = Annotated[
    str,
    AfterValidator(is_absolute_iri)
]

HttpIriString = Annotated[
    str,
    AfterValidator(is_http_iri)
]

VariableName = Annotated[
    str,
    AfterValidator(is_variable_name)
]
