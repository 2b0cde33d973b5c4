import factory

from .enums import Algorithm
from .enums import Mode
from .types import ExperimentConfig
from .types import TestFamilyParams


MAX_FACTORY_EXPONENT = 6


class TestFamilyParamsFactory(factory.Factory):
    class Meta:
        model = TestFamilyParams

    nu1 = factory.Faker("random_int", min=1, max=MAX_FACTORY_EXPONENT)

    @factory.lazy_attribute
    def nu2(self):
        faker = factory.Faker._get_faker()
        choices = [nu for nu in range(1, MAX_FACTORY_EXPONENT + 1) if nu != self.nu1]
        return faker.random_element(elements=choices)


class ExperimentConfigFactory(factory.Factory):
    class Meta:
        model = ExperimentConfig

    class Params:
        grid_size = 2

    family = factory.SubFactory(TestFamilyParamsFactory)
    seed = factory.Faker("random_int", min=0, max=2**32 - 1)
    algorithm = factory.Faker("random_element", elements=list(Algorithm))
    mode = Mode.TABLE
    replicates = 1

    @factory.lazy_attribute
    def n_list(self):
        return [2 ** (k + 2) for k in range(self.grid_size)]

    @factory.lazy_attribute
    def m_list(self):
        return list(range(self.grid_size))
